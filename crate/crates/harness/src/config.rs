//! Declarative experiment files (TOML).
//!
//! ```toml
//! test = "quartic-sine"
//! scheme = "grprec"
//! order = 5
//! meshes = [16, 32, 64, 128, 256]
//! cfl = 0.9
//! t_end = 4.0
//! output = "out/quartic_grprec5.csv"
//! ```

use std::path::{Path, PathBuf};

use grprec_core::ader::{Bootstrap, Scheme, SchemeConfig};
use serde::Deserialize;

use crate::cases::{ModelKind, TestCase};
use crate::driver::{RunSpec, DEFAULT_GAMMA};
use crate::error::HarnessError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    test: String,
    model: Option<String>,
    gamma: Option<f64>,
    scheme: Option<String>,
    order: Option<usize>,
    mesh: Option<usize>,
    meshes: Option<Vec<usize>>,
    cfl: Option<f64>,
    t_end: Option<f64>,
    output: Option<PathBuf>,
    bootstrap: Option<String>,
    #[serde(default)]
    parallel: bool,
    efficiency: Option<RawEfficiency>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEfficiency {
    schemes: Vec<String>,
    orders: Vec<usize>,
    repetitions: Option<usize>,
    /// CFL number of the DG runs for orders 2, 3, 4, 5.
    dg_cfl: Option<Vec<f64>>,
    target_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyConfig {
    pub schemes: Vec<Scheme>,
    pub orders: Vec<usize>,
    pub repetitions: usize,
    pub dg_cfl: Option<[f64; 4]>,
    pub target_error: f64,
}

impl EfficiencyConfig {
    /// Run specification of one (scheme, order) series.
    pub fn spec_for(&self, base: &RunSpec, scheme: Scheme, order: usize) -> RunSpec {
        let mut spec = *base;
        spec.scheme.scheme = scheme;
        spec.scheme.order = order;
        if let (Scheme::AderDg, Some(cfl)) = (scheme, self.dg_cfl) {
            spec.scheme.cfl = cfl[order - 2];
        }
        spec
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub spec: RunSpec,
    pub meshes: Vec<usize>,
    pub output: Option<PathBuf>,
    pub efficiency: Option<EfficiencyConfig>,
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T, HarnessError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| HarnessError::Config(e.to_string()))
}

impl Experiment {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, HarnessError> {
        let raw: RawConfig = toml::from_str(text).map_err(|source| HarnessError::Toml {
            path: origin.to_path_buf(),
            source,
        })?;
        let case: TestCase = raw.test.parse()?;
        if let Some(m) = &raw.model {
            let kind: ModelKind = m.parse()?;
            if kind != case.model() {
                return Err(HarnessError::Config(format!(
                    "test `{case}` uses the {:?} model, config says `{m}`",
                    case.model()
                )));
            }
        }
        let scheme: Scheme = match &raw.scheme {
            Some(s) => parse(s)?,
            None => Scheme::Grprec,
        };
        let mut sc = SchemeConfig::new(scheme, raw.order.unwrap_or(3));
        if let Some(c) = raw.cfl {
            sc.cfl = c;
        }
        if let Some(b) = &raw.bootstrap {
            sc.bootstrap = parse::<Bootstrap>(b)?;
        }
        sc.parallel = raw.parallel;
        sc.validate()?;

        let gamma = raw.gamma.unwrap_or(DEFAULT_GAMMA);
        if !(gamma > 1.0) {
            return Err(HarnessError::Config(format!("gamma must exceed 1, got {gamma}")));
        }
        let t_end = raw.t_end.unwrap_or(case.default_t_end());
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(HarnessError::Config(format!("t_end must be a finite non-negative number, got {t_end}")));
        }
        let meshes = raw.meshes.clone().unwrap_or_else(|| case.default_meshes());
        let mesh = raw.mesh.unwrap_or_else(|| case.default_mesh());
        if let Some(&bad) = meshes.iter().chain([&mesh]).find(|&&m| m < grprec_core::mesh::MIN_CELLS) {
            return Err(HarnessError::Config(format!(
                "meshes need at least {} cells, got {bad}",
                grprec_core::mesh::MIN_CELLS
            )));
        }

        let efficiency = match raw.efficiency {
            Some(e) => {
                let schemes = e.schemes.iter().map(|s| parse::<Scheme>(s)).collect::<Result<Vec<_>, _>>()?;
                if let Some(&o) = e.orders.iter().find(|o| !(2..=5).contains(*o)) {
                    return Err(HarnessError::Config(format!("efficiency order {o} outside 2..=5")));
                }
                let dg_cfl = match e.dg_cfl {
                    Some(v) => Some(<[f64; 4]>::try_from(v.as_slice()).map_err(|_| {
                        HarnessError::Config("dg_cfl needs four entries (orders 2 to 5)".into())
                    })?),
                    None => None,
                };
                Some(EfficiencyConfig {
                    schemes,
                    orders: e.orders,
                    repetitions: e.repetitions.unwrap_or(3),
                    dg_cfl,
                    target_error: e.target_error.unwrap_or(1e-16),
                })
            }
            None => None,
        };

        Ok(Experiment {
            spec: RunSpec {
                case,
                scheme: sc,
                mesh,
                t_end,
                gamma,
            },
            meshes,
            output: raw.output,
            efficiency,
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text, path)
    }
}

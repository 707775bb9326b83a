//! Registered test problems with their initial data and exact solutions.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use grprec_core::mesh::{cell_averages, Boundary, Grid};
use grprec_core::models::Euler;
use grprec_core::riemann::{exact_euler_rp, wave_speeds, PrimitiveState};

use crate::error::HarnessError;

/// Points per cell (and per smooth piece) for averaging exact solutions.
pub const EXACT_QUADRATURE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Advection,
    Euler,
}

impl FromStr for ModelKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.to_ascii_lowercase().as_str() {
            "advection" | "linear-advection" => Ok(ModelKind::Advection),
            "euler" => Ok(ModelKind::Euler),
            other => Err(HarnessError::Config(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestCase {
    /// Gaussian, square, triangle and ellipse pulses, advected for a long time.
    Multiwave,
    SquareWave,
    /// `sin^4(pi x)`, the smooth advection convergence test.
    QuarticSine,
    /// Advected density wave `1 + 0.2 sin(2 pi x)` at constant velocity and pressure.
    EulerSmooth,
    Sod,
    /// Two strong rarefactions receding from the centre.
    OneTwoThree,
}

/// Advection speed of the scalar test problems.
pub const ADVECTION_SPEED: f64 = 1.0;

impl TestCase {
    pub const ALL: [TestCase; 6] = [
        TestCase::Multiwave,
        TestCase::SquareWave,
        TestCase::QuarticSine,
        TestCase::EulerSmooth,
        TestCase::Sod,
        TestCase::OneTwoThree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestCase::Multiwave => "multiwave",
            TestCase::SquareWave => "square-wave",
            TestCase::QuarticSine => "quartic-sine",
            TestCase::EulerSmooth => "euler-smooth",
            TestCase::Sod => "sod",
            TestCase::OneTwoThree => "123",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            TestCase::Multiwave | TestCase::SquareWave | TestCase::QuarticSine => ModelKind::Advection,
            _ => ModelKind::Euler,
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self.model() {
            ModelKind::Advection => (-1.0, 1.0),
            ModelKind::Euler => (0.0, 1.0),
        }
    }

    pub fn boundary(self) -> Boundary {
        match self {
            TestCase::Sod | TestCase::OneTwoThree => Boundary::Transmissive,
            _ => Boundary::Periodic,
        }
    }

    pub fn default_t_end(self) -> f64 {
        match self {
            TestCase::Multiwave => 2000.0,
            TestCase::SquareWave | TestCase::QuarticSine | TestCase::EulerSmooth => 4.0,
            TestCase::Sod => 0.2,
            TestCase::OneTwoThree => 0.15,
        }
    }

    pub fn default_mesh(self) -> usize {
        match self {
            TestCase::Multiwave | TestCase::Sod | TestCase::OneTwoThree => 100,
            TestCase::SquareWave => 50,
            TestCase::QuarticSine => 256,
            TestCase::EulerSmooth => 160,
        }
    }

    pub fn default_meshes(self) -> Vec<usize> {
        match self {
            TestCase::QuarticSine => vec![16, 32, 64, 128, 256],
            TestCase::EulerSmooth => vec![40, 80, 160, 320, 640],
            _ => vec![50, 100, 200, 400],
        }
    }

    /// Whether error norms against an exact solution are meaningful (the
    /// discontinuous advection tests report diagnostics instead).
    pub fn reports_errors(self) -> bool {
        !matches!(self, TestCase::Multiwave | TestCase::SquareWave)
    }

    /// Riemann data `(left, right, x_c)` of the shock-tube tests.
    pub fn riemann_data(self) -> Option<(PrimitiveState, PrimitiveState, f64)> {
        match self {
            TestCase::Sod => Some((
                PrimitiveState::new(1.0, 0.0, 1.0),
                PrimitiveState::new(0.125, 0.0, 0.1),
                0.3,
            )),
            TestCase::OneTwoThree => Some((
                PrimitiveState::new(1.0, -2.0, 0.4),
                PrimitiveState::new(1.0, 2.0, 0.4),
                0.5,
            )),
            _ => None,
        }
    }

    /// Discontinuities of the initial data.
    pub fn breakpoints(self) -> Vec<f64> {
        match self {
            TestCase::Multiwave => vec![-0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.6],
            TestCase::SquareWave => vec![-0.3, 0.3],
            TestCase::Sod | TestCase::OneTwoThree => {
                vec![self.riemann_data().map(|d| d.2).unwrap_or_default()]
            }
            _ => Vec::new(),
        }
    }

    /// Initial condition of the scalar tests.
    pub fn scalar_initial(self, x: f64) -> f64 {
        match self {
            TestCase::Multiwave => multiwave(x),
            TestCase::SquareWave => {
                if (-0.3..=0.3).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            TestCase::QuarticSine => (PI * x).sin().powi(4),
            _ => f64::NAN,
        }
    }

    /// Primitive initial condition of the Euler tests.
    pub fn euler_initial(self, x: f64) -> PrimitiveState {
        match self {
            TestCase::EulerSmooth => PrimitiveState::new(1.0 + 0.2 * (2.0 * PI * x).sin(), 1.0, 2.0),
            _ => match self.riemann_data() {
                Some((l, r, xc)) => {
                    if x <= xc {
                        l
                    } else {
                        r
                    }
                }
                None => PrimitiveState::new(f64::NAN, f64::NAN, f64::NAN),
            },
        }
    }

    /// Exact scalar solution: the periodic shift of the initial data.
    pub fn scalar_exact(self, x: f64, t: f64) -> f64 {
        self.scalar_initial(self.wrap(x - ADVECTION_SPEED * t))
    }

    /// Exact Euler solution in primitive variables.
    pub fn euler_exact(self, gamma: f64, x: f64, t: f64) -> Result<PrimitiveState, HarnessError> {
        match self {
            TestCase::EulerSmooth => Ok(self.euler_initial(self.wrap(x - t))),
            _ => {
                let (l, r, xc) = self.riemann_data().ok_or_else(|| {
                    HarnessError::Config(format!("test `{}` is not an Euler problem", self.name()))
                })?;
                if t <= 0.0 {
                    return Ok(self.euler_initial(x));
                }
                Ok(exact_euler_rp(gamma, &l, &r, (x - xc) / t)?)
            }
        }
    }

    fn wrap(self, x: f64) -> f64 {
        let (a, b) = self.domain();
        a + (x - a).rem_euclid(b - a)
    }

    /// Locations where the exact solution at `t` is not smooth.
    pub fn exact_breakpoints(self, gamma: f64, t: f64) -> Result<Vec<f64>, HarnessError> {
        Ok(match self {
            TestCase::Multiwave | TestCase::SquareWave => self
                .breakpoints()
                .into_iter()
                .map(|b| self.wrap(b + ADVECTION_SPEED * t))
                .collect(),
            TestCase::Sod | TestCase::OneTwoThree => {
                let (l, r, xc) = self.riemann_data().expect("shock tube data");
                if t <= 0.0 {
                    vec![xc]
                } else {
                    wave_speeds(gamma, &l, &r)?.iter().map(|s| xc + s * t).collect()
                }
            }
            _ => Vec::new(),
        })
    }

    /// Exact cell averages of the scalar solution at `t`.
    pub fn scalar_exact_averages(self, grid: &Grid, t: f64) -> Result<Vec<[f64; 1]>, HarnessError> {
        let bps = self.exact_breakpoints(0.0, t)?;
        Ok(cell_averages(grid, |x| [self.scalar_exact(x, t)], EXACT_QUADRATURE, &bps)?)
    }

    /// Exact cell averages of the conserved Euler variables at `t`.
    pub fn euler_exact_averages(self, gamma: f64, grid: &Grid, t: f64) -> Result<Vec<[f64; 3]>, HarnessError> {
        let model = Euler::new(gamma)?;
        let bps = self.exact_breakpoints(gamma, t)?;
        // Validate once so the closure below cannot fail.
        self.euler_exact(gamma, grid.cell_center(0), t)?;
        let f = |x: f64| {
            self.euler_exact(gamma, x, t)
                .map(|w| model.prim_to_cons(&w))
                .unwrap_or([f64::NAN; 3])
        };
        Ok(cell_averages(grid, f, EXACT_QUADRATURE, &bps)?)
    }
}

fn multiwave(x: f64) -> f64 {
    if (-0.8..=-0.6).contains(&x) {
        (-LN_2 * (x + 0.7).powi(2) / 0.0009).exp()
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * x - 1.0).abs()
    } else if (0.4..=0.6).contains(&x) {
        (1.0 - 100.0 * (x - 0.5).powi(2)).max(0.0).sqrt()
    } else {
        0.0
    }
}

impl fmt::Display for TestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestCase {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        TestCase::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .or(match key.as_str() {
                "squarewave" | "square" => Some(TestCase::SquareWave),
                "quartic" | "sin4" => Some(TestCase::QuarticSine),
                "euler" | "smooth" => Some(TestCase::EulerSmooth),
                "one-two-three" | "einfeldt" => Some(TestCase::OneTwoThree),
                _ => None,
            })
            .ok_or_else(|| HarnessError::Config(format!("unknown test `{s}`")))
    }
}

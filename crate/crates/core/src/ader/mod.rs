//! Fully discrete one-step ADER schemes: finite volume with GRPrec, GRPrecNL
//! or WENO-DK reconstruction, and modal ADER-DG. All of them share the
//! space-time predictor and the interface flux quadrature.

pub mod predictor;
pub mod step;

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::mesh::{cell_averages, FieldState, Grid, InterfaceLedger};
use crate::models::PdeModel;
use crate::parallel::map_indices;
use crate::poly::{gauss_legendre, legendre_values, ReconstructionPolynomial, MAX_DEGREE, MAX_MODES};
use crate::reconstruction::{reconstruct_field, ReconstructionMethod};

pub use predictor::{det_predictor, SpaceTimePredictor};
pub use step::{interface_quadrature, timestep, InterfaceFluxes};

/// Quadrature points per cell used to average or project initial data.
pub const INIT_QUADRATURE: usize = 10;

/// Spatial discretisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Finite volume with the linear GRPrec reconstruction.
    Grprec,
    /// Finite volume with the nonlinear GRPrecNL reconstruction.
    GrprecNl,
    /// Finite volume with WENO-DK reconstruction.
    WenoDk,
    /// Modal ADER-DG.
    AderDg,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Grprec, Scheme::GrprecNl, Scheme::WenoDk, Scheme::AderDg];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Grprec => "grprec",
            Scheme::GrprecNl => "grprec-nl",
            Scheme::WenoDk => "weno-dk",
            Scheme::AderDg => "dg",
        }
    }

    pub fn reconstruction(self) -> Option<ReconstructionMethod> {
        match self {
            Scheme::Grprec => Some(ReconstructionMethod::Grprec),
            Scheme::GrprecNl => Some(ReconstructionMethod::GrprecNl),
            Scheme::WenoDk => Some(ReconstructionMethod::WenoDk),
            Scheme::AderDg => None,
        }
    }

    pub fn is_dg(self) -> bool {
        self == Scheme::AderDg
    }

    fn needs_ledger(self) -> bool {
        self.reconstruction().is_some_and(|r| r.needs_ledger())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "grprec" => Ok(Scheme::Grprec),
            "grprec-nl" | "grprecnl" => Ok(Scheme::GrprecNl),
            "weno-dk" | "wenodk" | "weno" => Ok(Scheme::WenoDk),
            "dg" | "ader-dg" => Ok(Scheme::AderDg),
            other => Err(SolverError::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Reconstruction used for the first finite-volume step, before any
/// interface states exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Bootstrap {
    #[default]
    WenoDk,
    CentralLinear,
}

impl Bootstrap {
    fn method(self) -> ReconstructionMethod {
        match self {
            Bootstrap::WenoDk => ReconstructionMethod::WenoDk,
            Bootstrap::CentralLinear => ReconstructionMethod::CentralLinear,
        }
    }
}

impl FromStr for Bootstrap {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "weno-dk" | "wenodk" | "weno" => Ok(Bootstrap::WenoDk),
            "central-linear" | "central" => Ok(Bootstrap::CentralLinear),
            other => Err(SolverError::InvalidArgument(format!("unknown bootstrap `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Formal order `m + 1`, in `2..=5`.
    pub order: usize,
    pub cfl: f64,
    pub bootstrap: Bootstrap,
    /// Run the per-cell and per-interface loops on the rayon pool.
    pub parallel: bool,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, order: usize) -> Self {
        SchemeConfig {
            scheme,
            order,
            cfl: 0.9,
            bootstrap: Bootstrap::WenoDk,
            parallel: false,
        }
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    /// Polynomial degree `m`.
    pub fn degree(&self) -> usize {
        self.order - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_DEGREE + 1).contains(&self.order) {
            return Err(SolverError::InvalidArgument(format!(
                "order must be in 2..={}, got {}",
                MAX_DEGREE + 1,
                self.order
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::InvalidArgument(format!(
                "CFL number must be in (0, 1], got {}",
                self.cfl
            )));
        }
        Ok(())
    }
}

/// Per-cell modal coefficients `modes[i][k][v]` of a DG solution.
pub type DgModes<const N: usize> = Vec<[[f64; N]; MAX_MODES]>;

/// L2 projection of `f` onto degree-`m` Legendre modes in every cell.
pub fn project_dg<const N: usize, F>(grid: &Grid, f: F, degree: usize, breakpoints: &[f64]) -> Result<DgModes<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let rule = gauss_legendre(INIT_QUADRATURE)?;
    let mut out = Vec::with_capacity(grid.num_cells);
    for i in 0..grid.num_cells {
        let a = grid.interface_position(i);
        let b = grid.interface_position(i + 1);
        let mut edges = vec![a];
        let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
        cuts.sort_by(|x, y| x.total_cmp(y));
        edges.extend(cuts);
        edges.push(b);
        let mut modes = [[0.0; N]; MAX_MODES];
        for w in edges.windows(2) {
            let h = w[1] - w[0];
            for (&s, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let x = w[0] + s * h;
                let val = f(x);
                let lv = legendre_values((x - a) / (b - a));
                for k in 0..=degree {
                    for v in 0..N {
                        modes[k][v] += (2.0 * k as f64 + 1.0) * wt * h / (b - a) * lv[k] * val[v];
                    }
                }
            }
        }
        if modes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(SolverError::NonFinite(format!("initial DG projection in cell {i}")));
        }
        out.push(modes);
    }
    Ok(out)
}

/// Time integrator for one model on one grid.
#[derive(Debug, Clone)]
pub struct Solver<const N: usize, P: PdeModel<N>> {
    model: P,
    grid: Grid,
    config: SchemeConfig,
    state: FieldState<N>,
    ledger: Option<InterfaceLedger<N>>,
    dg: Option<DgModes<N>>,
}

impl<const N: usize, P: PdeModel<N>> Solver<N, P> {
    /// Solver initialised from pointwise data; `breakpoints` mark
    /// discontinuities of `ic` so that cell averages are exact there.
    pub fn new<F>(model: P, grid: Grid, config: SchemeConfig, ic: F, breakpoints: &[f64]) -> Result<Self>
    where
        F: Fn(f64) -> [f64; N],
    {
        config.validate()?;
        if config.scheme.is_dg() {
            let modes = project_dg(&grid, ic, config.degree(), breakpoints)?;
            let state = FieldState::new(modes.iter().map(|m| m[0]).collect());
            Ok(Solver {
                model,
                grid,
                config,
                state,
                ledger: None,
                dg: Some(modes),
            })
        } else {
            let averages = cell_averages(&grid, ic, INIT_QUADRATURE, breakpoints)?;
            Self::from_averages(model, grid, config, FieldState::new(averages))
        }
    }

    /// Finite-volume solver starting from given averages.
    pub fn from_averages(model: P, grid: Grid, config: SchemeConfig, state: FieldState<N>) -> Result<Self> {
        config.validate()?;
        if config.scheme.is_dg() {
            return Err(SolverError::InvalidArgument(
                "DG solvers need a projected polynomial, not cell averages".into(),
            ));
        }
        if state.num_cells() != grid.num_cells {
            return Err(SolverError::InvalidArgument(format!(
                "{} averages for {} cells",
                state.num_cells(),
                grid.num_cells
            )));
        }
        Ok(Solver {
            model,
            grid,
            config,
            state,
            ledger: None,
            dg: None,
        })
    }

    pub fn model(&self) -> &P {
        &self.model
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    /// Current cell averages (mode 0 for DG).
    pub fn state(&self) -> &FieldState<N> {
        &self.state
    }

    pub fn ledger(&self) -> Option<&InterfaceLedger<N>> {
        self.ledger.as_ref()
    }

    pub fn dg_modes(&self) -> Option<&DgModes<N>> {
        self.dg.as_ref()
    }

    /// Replaces the interface ledger (for experiments with the first step).
    pub fn set_ledger(&mut self, ledger: InterfaceLedger<N>) {
        self.ledger = Some(ledger);
    }

    /// Reconstruction the next finite-volume step would use.
    pub fn next_reconstruction(&self) -> Result<(ReconstructionMethod, Vec<ReconstructionPolynomial<N>>)> {
        let method = self.config.scheme.reconstruction().ok_or_else(|| {
            SolverError::InvalidArgument("DG solvers do not reconstruct".into())
        })?;
        let method = if method.needs_ledger() && self.ledger.is_none() {
            self.config.bootstrap.method()
        } else {
            method
        };
        let polys = reconstruct_field(
            method,
            self.config.degree(),
            &self.model,
            &self.grid,
            &self.state,
            self.ledger.as_ref(),
            self.config.parallel,
        )?;
        Ok((method, polys))
    }

    /// Advances one step without passing `t_end`; returns the step size.
    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        let (step, time) = (self.state.step, self.state.time);
        self.try_step(t_end).map_err(|e| e.at_step(step, time))
    }

    fn try_step(&mut self, t_end: f64) -> Result<f64> {
        let m = self.config.degree();
        let dg_degree = self.config.scheme.is_dg().then_some(m);
        let dt = timestep(&self.model, &self.grid, &self.state, self.config.cfl, dg_degree, t_end)?;
        if dt <= 0.0 {
            return Err(SolverError::InvalidArgument(format!(
                "no time left: t = {}, t_end = {t_end}",
                self.state.time
            )));
        }
        let parallel = self.config.parallel;
        let model = &self.model;
        if let Some(modes) = &self.dg {
            let grid = &self.grid;
            let predictors = map_indices(grid.num_cells, parallel, |i| {
                let p = ReconstructionPolynomial {
                    degree: m,
                    cell: i,
                    dx: grid.dx,
                    coeffs: modes[i],
                };
                det_predictor(model, &p, dt)
            })?;
            let fluxes = interface_quadrature(model, grid, &predictors, false, parallel)?;
            let next = step::dg_update(model, grid, modes, &predictors, &fluxes, dt)?;
            let averages: Vec<[f64; N]> = next.iter().map(|u| u[0]).collect();
            if let Some(i) = averages.iter().position(|q| !model.is_admissible(q)) {
                return Err(SolverError::Inadmissible {
                    cell: i,
                    detail: model.describe_inadmissible(&averages[i]),
                });
            }
            self.state = FieldState {
                averages,
                time: self.state.time + dt,
                step: self.state.step + 1,
            };
            self.dg = Some(next);
        } else {
            let (_, polys) = self.next_reconstruction()?;
            let predictors = map_indices(self.grid.num_cells, parallel, |i| {
                det_predictor(model, &polys[i], dt)
            })?;
            let fluxes = interface_quadrature(
                model,
                &self.grid,
                &predictors,
                self.config.scheme.needs_ledger(),
                parallel,
            )?;
            let (next, ledger) = step::fv_update(model, &self.grid, &self.state, &predictors, &fluxes, dt)?;
            self.state = next;
            self.ledger = ledger;
        }
        if (self.state.time - t_end).abs() <= 1e-12 * t_end.abs().max(1.0) {
            self.state.time = t_end;
        }
        Ok(dt)
    }

    /// Steps until `t_end` is reached exactly.
    pub fn run(&mut self, t_end: f64) -> Result<()> {
        if t_end < self.state.time {
            return Err(SolverError::InvalidArgument(format!(
                "t_end = {t_end} lies before t = {}",
                self.state.time
            )));
        }
        while self.state.time < t_end {
            self.step(t_end)?;
        }
        Ok(())
    }
}

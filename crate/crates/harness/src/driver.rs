//! Single simulation runs.

use std::time::Instant;

use grprec_core::mesh::{error_norms, ErrorNorms, FieldState, Grid};
use grprec_core::models::{Advection, Euler, PdeModel};
use grprec_core::riemann::PrimitiveState;
use grprec_core::{SchemeConfig, Solver};

use crate::cases::{ModelKind, TestCase, ADVECTION_SPEED};
use crate::error::HarnessError;

/// Default ratio of specific heats.
pub const DEFAULT_GAMMA: f64 = 1.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub case: TestCase,
    pub scheme: SchemeConfig,
    pub mesh: usize,
    pub t_end: f64,
    pub gamma: f64,
}

impl RunSpec {
    pub fn new(case: TestCase, scheme: SchemeConfig, mesh: usize) -> Self {
        RunSpec {
            case,
            scheme,
            mesh,
            t_end: case.default_t_end(),
            gamma: DEFAULT_GAMMA,
        }
    }

    pub fn with_mesh(mut self, mesh: usize) -> Self {
        self.mesh = mesh;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn grid(&self) -> Result<Grid, HarnessError> {
        let (a, b) = self.case.domain();
        Ok(Grid::new(a, b, self.mesh, self.case.boundary())?)
    }
}

/// Final cell averages of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Scalar(FieldState<1>),
    Euler(FieldState<3>),
}

impl Solution {
    /// The scalar, or the density for Euler.
    pub fn primary(&self) -> Vec<f64> {
        match self {
            Solution::Scalar(s) => s.component(0),
            Solution::Euler(s) => s.component(0),
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            Solution::Scalar(s) => s.time,
            Solution::Euler(s) => s.time,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            Solution::Scalar(s) => s.step,
            Solution::Euler(s) => s.step,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub spec: RunSpec,
    pub grid: Grid,
    pub solution: Solution,
    /// Wall-clock seconds spent in the time-stepping loop.
    pub seconds: f64,
    pub steps: usize,
}

impl RunOutcome {
    /// Norms of the scalar (or density) error against exact cell averages.
    pub fn errors(&self) -> Result<ErrorNorms, HarnessError> {
        let t = self.solution.time();
        match &self.solution {
            Solution::Scalar(s) => {
                let exact = self.spec.case.scalar_exact_averages(&self.grid, t)?;
                Ok(error_norms(&s.averages, &exact, self.grid.dx)?[0])
            }
            Solution::Euler(s) => {
                let exact = self.spec.case.euler_exact_averages(self.spec.gamma, &self.grid, t)?;
                Ok(error_norms(&s.averages, &exact, self.grid.dx)?[0])
            }
        }
    }

    /// Primitive variables recovered from the final averages.
    pub fn primitive_profile(&self) -> Option<Vec<PrimitiveState>> {
        match &self.solution {
            Solution::Euler(s) => {
                let model = Euler::new(self.spec.gamma).ok()?;
                Some(s.averages.iter().map(|q| model.cons_to_prim(q)).collect())
            }
            Solution::Scalar(_) => None,
        }
    }
}

fn integrate<const N: usize, P: PdeModel<N>, F>(
    model: P,
    spec: &RunSpec,
    grid: Grid,
    ic: F,
) -> Result<(FieldState<N>, f64), HarnessError>
where
    F: Fn(f64) -> [f64; N],
{
    let mut solver = Solver::new(model, grid, spec.scheme, ic, &spec.case.breakpoints())?;
    let start = Instant::now();
    solver.run(spec.t_end)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok((solver.state().clone(), seconds))
}

/// Runs `spec` from the initial data to `t_end`.
pub fn run(spec: &RunSpec) -> Result<RunOutcome, HarnessError> {
    let grid = spec.grid()?;
    let case = spec.case;
    let (solution, seconds) = match case.model() {
        ModelKind::Advection => {
            let model = Advection::new(ADVECTION_SPEED)?;
            let (s, secs) = integrate(model, spec, grid, |x| [case.scalar_initial(x)])?;
            (Solution::Scalar(s), secs)
        }
        ModelKind::Euler => {
            let model = Euler::new(spec.gamma)?;
            let (s, secs) = integrate(model, spec, grid, |x| model.prim_to_cons(&case.euler_initial(x)))?;
            (Solution::Euler(s), secs)
        }
    };
    let steps = solution.steps();
    Ok(RunOutcome {
        spec: *spec,
        grid,
        solution,
        seconds,
        steps,
    })
}

/// Total variation and range of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub total_variation: f64,
    pub min: f64,
    pub max: f64,
}

/// Diagnostics of a periodic profile (the wrap-around jump is included).
pub fn diagnostics(values: &[f64]) -> Diagnostics {
    let n = values.len();
    let total_variation = (0..n).map(|i| (values[(i + 1) % n] - values[i]).abs()).sum();
    Diagnostics {
        total_variation,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use grprec_core::Scheme;

    #[test]
    fn zero_end_time_returns_initial_state() {
        let spec = RunSpec::new(TestCase::QuarticSine, SchemeConfig::new(Scheme::Grprec, 3), 32).with_t_end(0.0);
        let out = run(&spec).unwrap();
        assert_eq!(out.steps, 0);
        assert!(out.errors().unwrap().linf < 1e-12);
    }

    #[test]
    fn diagnostics_of_square_profile() {
        let d = diagnostics(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(d.total_variation, 2.0);
        assert_eq!((d.min, d.max), (0.0, 1.0));
    }
}

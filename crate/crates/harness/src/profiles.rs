//! Cell-centre profiles with exact reference columns.

use std::io::Write;

use grprec_core::riemann::PrimitiveState;

use crate::driver::{run, RunOutcome, RunSpec};
use crate::error::HarnessError;
use crate::output::{write_euler_profile, write_scalar_profile};

/// Final Euler state of a shock-tube run next to the exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannProfile {
    pub x: Vec<f64>,
    pub numerical: Vec<PrimitiveState>,
    /// Exact solution sampled at cell centres.
    pub exact: Vec<PrimitiveState>,
    /// L1 distance of the density averages from the exact averages.
    pub density_l1: f64,
    pub outcome: RunOutcome,
}

impl RiemannProfile {
    pub fn min_density(&self) -> f64 {
        self.numerical.iter().map(|w| w.rho).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        write_euler_profile(w, &self.x, &self.numerical, &self.exact)
    }
}

/// Runs a shock-tube test and samples the exact Riemann solution.
pub fn riemann_profile(spec: &RunSpec) -> Result<RiemannProfile, HarnessError> {
    if spec.case.riemann_data().is_none() {
        return Err(HarnessError::Config(format!(
            "test `{}` is not a Riemann problem",
            spec.case
        )));
    }
    let outcome = run(spec)?;
    let t = outcome.solution.time();
    let x: Vec<f64> = (0..outcome.grid.num_cells).map(|i| outcome.grid.cell_center(i)).collect();
    let exact = x
        .iter()
        .map(|&xc| spec.case.euler_exact(spec.gamma, xc, t))
        .collect::<Result<Vec<_>, _>>()?;
    let numerical = outcome.primitive_profile().unwrap_or_default();
    let density_l1 = outcome.errors()?.l1;
    Ok(RiemannProfile {
        x,
        numerical,
        exact,
        density_l1,
        outcome,
    })
}

/// Writes the profile of any finished run: `x, q, q_exact` for scalar
/// tests (exact cell averages) and the primitive columns for Euler tests
/// (exact solution at cell centres).
pub fn write_profile<W: Write>(outcome: &RunOutcome, w: W) -> Result<(), HarnessError> {
    let grid = &outcome.grid;
    let t = outcome.solution.time();
    let x: Vec<f64> = (0..grid.num_cells).map(|i| grid.cell_center(i)).collect();
    let case = outcome.spec.case;
    match outcome.primitive_profile() {
        Some(num) => {
            let exact = x
                .iter()
                .map(|&xc| case.euler_exact(outcome.spec.gamma, xc, t))
                .collect::<Result<Vec<_>, _>>()?;
            write_euler_profile(w, &x, &num, &exact)
        }
        None => {
            let exact: Vec<f64> = case.scalar_exact_averages(grid, t)?.iter().map(|q| q[0]).collect();
            write_scalar_profile(w, &x, &outcome.solution.primary(), &exact)
        }
    }
}

//! Uniform 1D grid, cell-average fields, the interface ledger and discrete
//! error norms.

use crate::error::{Result, SolverError};
use crate::poly::gauss_legendre;

/// Smallest admissible number of cells (stencils reach interfaces `i-2 .. i+1`).
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    /// Zero-gradient ghost cells; ledger knots outside the domain copy the
    /// nearest boundary interface state.
    Transmissive,
}

/// Uniform grid of `num_cells` cells tiling `[x_min, x_max]`.
///
/// Cell `i` is `[x_min + i dx, x_min + (i+1) dx]`; interface `j` sits at
/// `x_min + j dx` for `j = 0 ..= num_cells`, so cell `i` has interfaces `i`
/// (left) and `i + 1` (right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub num_cells: usize,
    pub dx: f64,
    pub boundary: Boundary,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, num_cells: usize, boundary: Boundary) -> Result<Grid> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(SolverError::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if num_cells < MIN_CELLS {
            return Err(SolverError::InvalidGrid(format!(
                "at least {MIN_CELLS} cells required, got {num_cells}"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            num_cells,
            dx: (x_max - x_min) / num_cells as f64,
            boundary,
        })
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Position of interface `j`; the last interface is pinned to `x_max`.
    pub fn interface_position(&self, j: usize) -> f64 {
        if j == self.num_cells {
            self.x_max
        } else {
            self.x_min + j as f64 * self.dx
        }
    }

    pub fn cell_left(&self, i: usize) -> f64 {
        self.interface_position(i)
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Maps a possibly out-of-range cell index onto stored data
    /// (periodic wrap or ghost-cell copy).
    pub fn cell_index(&self, i: isize) -> usize {
        let m = self.num_cells as isize;
        match self.boundary {
            Boundary::Periodic => i.rem_euclid(m) as usize,
            Boundary::Transmissive => i.clamp(0, m - 1) as usize,
        }
    }

    /// Same as [`Grid::cell_index`] for interface indices `0 ..= num_cells`.
    pub fn interface_index(&self, j: isize) -> usize {
        let m = self.num_cells as isize;
        match self.boundary {
            Boundary::Periodic => j.rem_euclid(m) as usize,
            Boundary::Transmissive => j.clamp(0, m) as usize,
        }
    }
}

/// Cell averages of an `N`-component system at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<const N: usize> {
    pub averages: Vec<[f64; N]>,
    pub time: f64,
    pub step: usize,
}

impl<const N: usize> FieldState<N> {
    pub fn new(averages: Vec<[f64; N]>) -> Self {
        FieldState {
            averages,
            time: 0.0,
            step: 0,
        }
    }

    pub fn num_cells(&self) -> usize {
        self.averages.len()
    }

    /// `sum_i Q_i dx` per component.
    pub fn total(&self, dx: f64) -> [f64; N] {
        let mut t = [0.0; N];
        for q in &self.averages {
            for v in 0..N {
                t[v] += q[v] * dx;
            }
        }
        t
    }

    pub fn component(&self, v: usize) -> Vec<f64> {
        self.averages.iter().map(|q| q[v]).collect()
    }

    /// Index of the first cell holding a NaN or infinite entry.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.averages
            .iter()
            .position(|q| q.iter().any(|x| !x.is_finite()))
    }
}

/// Interface states `q^{n-1}_{j}` produced by the Riemann interaction at the
/// end of the previous step; interface `j` is at `x_min + j dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceLedger<const N: usize> {
    pub states: Vec<[f64; N]>,
    /// Step index of the state from which these interface values were computed.
    pub valid_from_step: usize,
    /// Time step that produced the entries.
    pub dt_prev: f64,
}

impl<const N: usize> InterfaceLedger<N> {
    pub fn uniform(num_cells: usize, value: [f64; N], valid_from_step: usize, dt_prev: f64) -> Self {
        InterfaceLedger {
            states: vec![value; num_cells + 1],
            valid_from_step,
            dt_prev,
        }
    }

    /// Knot value at a possibly out-of-range interface index.
    pub fn knot(&self, grid: &Grid, j: isize) -> [f64; N] {
        self.states[grid.interface_index(j)]
    }

    /// Fails unless the ledger was produced by the step immediately before `step`.
    pub fn check_fresh(&self, step: usize) -> Result<()> {
        if self.valid_from_step + 1 != step {
            return Err(SolverError::StaleLedger {
                valid_from: self.valid_from_step,
                step,
            });
        }
        Ok(())
    }

    /// Periodic identification of the first and last interface.
    pub fn is_periodic_consistent(&self) -> bool {
        match (self.states.first(), self.states.last()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

/// Cell averages of `f` computed with `quad_order`-point Gauss-Legendre per
/// cell. Cells containing one of `breakpoints` are split there and each piece
/// is integrated separately, so piecewise-smooth data are averaged exactly up
/// to the quadrature error of the smooth pieces.
pub fn cell_averages<const N: usize, F>(
    grid: &Grid,
    f: F,
    quad_order: usize,
    breakpoints: &[f64],
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64) -> [f64; N],
{
    let rule = gauss_legendre(quad_order)?;
    let mut out = Vec::with_capacity(grid.num_cells);
    for i in 0..grid.num_cells {
        let a = grid.interface_position(i);
        let b = grid.interface_position(i + 1);
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&x| x > a && x < b)
            .collect();
        cuts.sort_by(|x, y| x.total_cmp(y));
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(a);
        edges.extend(cuts);
        edges.push(b);
        let mut acc = [0.0; N];
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let h = hi - lo;
            for (&xi, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let val = f(lo + xi * h);
                for v in 0..N {
                    acc[v] += wt * h * val[v];
                }
            }
        }
        let avg = acc.map(|s| s / (b - a));
        if avg.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::NonFinite(format!(
                "initial condition average in cell {i}"
            )));
        }
        out.push(avg);
    }
    Ok(out)
}

/// Initial cell averages `Q^0_i` from a pointwise initial condition.
pub fn init_averages<const N: usize, F>(grid: &Grid, ic: F, quad_order: usize) -> Result<FieldState<N>>
where
    F: Fn(f64) -> [f64; N],
{
    init_averages_piecewise(grid, ic, quad_order, &[])
}

/// As [`init_averages`], honouring discontinuity locations of the data.
pub fn init_averages_piecewise<const N: usize, F>(
    grid: &Grid,
    ic: F,
    quad_order: usize,
    breakpoints: &[f64],
) -> Result<FieldState<N>>
where
    F: Fn(f64) -> [f64; N],
{
    Ok(FieldState::new(cell_averages(grid, ic, quad_order, breakpoints)?))
}

/// Discrete norms of a cell-average error field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub linf: f64,
    pub l1: f64,
    pub l2: f64,
}

/// `L1 = sum |e_i| dx`, `L2 = sqrt(sum e_i^2 dx)`, `Linf = max |e_i|`, per component.
pub fn error_norms<const N: usize>(
    numerical: &[[f64; N]],
    exact: &[[f64; N]],
    dx: f64,
) -> Result<[ErrorNorms; N]> {
    if numerical.len() != exact.len() {
        return Err(SolverError::InvalidArgument(format!(
            "error_norms: {} numerical cells vs {} exact cells",
            numerical.len(),
            exact.len()
        )));
    }
    let mut norms = [ErrorNorms::default(); N];
    for (q, e) in numerical.iter().zip(exact) {
        for v in 0..N {
            let d = (q[v] - e[v]).abs();
            norms[v].linf = norms[v].linf.max(d);
            norms[v].l1 += d * dx;
            norms[v].l2 += d * d * dx;
        }
    }
    for n in norms.iter_mut() {
        n.l2 = n.l2.sqrt();
    }
    Ok(norms)
}

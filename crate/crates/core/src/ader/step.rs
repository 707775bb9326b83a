//! Single-step building blocks shared by the finite-volume and DG updates.

use crate::error::{Result, SolverError};
use crate::mesh::{Boundary, FieldState, Grid, InterfaceLedger};
use crate::models::{max_wavespeed, PdeModel};
use crate::parallel::map_indices;
use crate::poly::MAX_MODES;

use super::predictor::{predictor_tables, SpaceTimePredictor};

/// Time-averaged numerical fluxes at the `M + 1` interfaces and, when
/// requested, the Godunov states at the end of the step.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceFluxes<const N: usize> {
    pub fluxes: Vec<[f64; N]>,
    pub end_states: Option<Vec<[f64; N]>>,
}

/// Which predictor traces meet at interface `j`: `(left cell, use its right
/// trace, right cell, use its left trace)`. A transmissive boundary sees a
/// ghost cell holding a copy of the boundary cell's predictor.
fn interface_neighbours(grid: &Grid, j: usize) -> (usize, bool, usize, bool) {
    let m = grid.num_cells;
    match grid.boundary {
        Boundary::Periodic => ((j + m - 1) % m, true, j % m, true),
        Boundary::Transmissive => {
            if j == 0 {
                (0, true, 0, true)
            } else if j == m {
                (m - 1, true, m - 1, true)
            } else {
                (j - 1, true, j, true)
            }
        }
    }
}

/// Gauss-Legendre time quadrature of the Godunov flux at every interface.
pub fn interface_quadrature<const N: usize, P: PdeModel<N>>(
    model: &P,
    grid: &Grid,
    predictors: &[SpaceTimePredictor<N>],
    with_end_states: bool,
    parallel: bool,
) -> Result<InterfaceFluxes<N>> {
    let degree = predictors
        .first()
        .map(|p| p.degree)
        .ok_or_else(|| SolverError::InvalidArgument("no predictors".into()))?;
    let t = predictor_tables(degree);
    let results = map_indices(grid.num_cells + 1, parallel, |j| {
        let (lc, l_right, rc, r_left) = interface_neighbours(grid, j);
        let (pl, pr) = (&predictors[lc], &predictors[rc]);
        let mut flux = [0.0; N];
        for b in 0..=degree {
            let ql = if l_right { pl.right_trace(b) } else { pl.left_trace(b) };
            let qr = if r_left { pr.left_trace(b) } else { pr.right_trace(b) };
            let star = model.godunov_state(&ql, &qr).map_err(|e| e.at_interface(j))?;
            let f = model.flux(&star);
            for v in 0..N {
                flux[v] += t.weights[b] * f[v];
            }
        }
        let end = if with_end_states {
            let ql = pl.end_trace(l_right);
            let qr = pr.end_trace(!r_left);
            Some(model.godunov_state(&ql, &qr).map_err(|e| e.at_interface(j))?)
        } else {
            None
        };
        Ok((flux, end))
    })?;
    let mut fluxes = Vec::with_capacity(results.len());
    let mut ends = with_end_states.then(|| Vec::with_capacity(results.len()));
    for (f, e) in results {
        fluxes.push(f);
        if let (Some(v), Some(e)) = (ends.as_mut(), e) {
            v.push(e);
        }
    }
    Ok(InterfaceFluxes {
        fluxes,
        end_states: ends,
    })
}

/// `dt int int S(W) dxi dtau` over the reference element.
pub fn source_integral<const N: usize, P: PdeModel<N>>(
    model: &P,
    pred: &SpaceTimePredictor<N>,
    dt: f64,
) -> [f64; N] {
    let t = predictor_tables(pred.degree);
    let mut out = [0.0; N];
    for a in 0..=pred.degree {
        for b in 0..=pred.degree {
            let s = model.source(&pred.values[a][b]);
            let w = dt * t.weights[a] * t.weights[b];
            for v in 0..N {
                out[v] += w * s[v];
            }
        }
    }
    out
}

/// Conservative update of the averages from precomputed interface fluxes.
pub fn fv_update<const N: usize, P: PdeModel<N>>(
    model: &P,
    grid: &Grid,
    state: &FieldState<N>,
    predictors: &[SpaceTimePredictor<N>],
    fluxes: &InterfaceFluxes<N>,
    dt: f64,
) -> Result<(FieldState<N>, Option<InterfaceLedger<N>>)> {
    let lam = dt / grid.dx;
    let source = model.has_source();
    let mut next = Vec::with_capacity(grid.num_cells);
    for (i, q) in state.averages.iter().enumerate() {
        let (fl, fr) = (fluxes.fluxes[i], fluxes.fluxes[i + 1]);
        let s = if source {
            source_integral(model, &predictors[i], dt)
        } else {
            [0.0; N]
        };
        let mut qn = [0.0; N];
        for v in 0..N {
            qn[v] = q[v] - lam * (fr[v] - fl[v]) + s[v];
        }
        if qn.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::NonFinite(format!("updated average in cell {i}")));
        }
        if !model.is_admissible(&qn) {
            return Err(SolverError::Inadmissible {
                cell: i,
                detail: format!(
                    "{} after update (a smaller CFL number may help)",
                    model.describe_inadmissible(&qn)
                ),
            });
        }
        next.push(qn);
    }
    let ledger = fluxes.end_states.as_ref().map(|s| InterfaceLedger {
        states: s.clone(),
        valid_from_step: state.step,
        dt_prev: dt,
    });
    Ok((
        FieldState {
            averages: next,
            time: state.time + dt,
            step: state.step + 1,
        },
        ledger,
    ))
}

/// Modal DG update `u_k += (2k+1) [ (dt/dx)(volume - surface) + source ]`.
pub fn dg_update<const N: usize, P: PdeModel<N>>(
    model: &P,
    grid: &Grid,
    modes: &[[[f64; N]; MAX_MODES]],
    predictors: &[SpaceTimePredictor<N>],
    fluxes: &InterfaceFluxes<N>,
    dt: f64,
) -> Result<Vec<[[f64; N]; MAX_MODES]>> {
    let degree = predictors[0].degree;
    let t = predictor_tables(degree);
    let lam = dt / grid.dx;
    let source = model.has_source();
    let mut out = Vec::with_capacity(modes.len());
    for (i, (u, pred)) in modes.iter().zip(predictors).enumerate() {
        let (fl, fr) = (fluxes.fluxes[i], fluxes.fluxes[i + 1]);
        let mut flux_avg = [[0.0; N]; MAX_MODES];
        let mut src_avg = [[0.0; N]; MAX_MODES];
        for a in 0..=degree {
            for b in 0..=degree {
                let f = model.flux(&pred.values[a][b]);
                let s = if source { model.source(&pred.values[a][b]) } else { [0.0; N] };
                for v in 0..N {
                    flux_avg[a][v] += t.weights[b] * f[v];
                    src_avg[a][v] += t.weights[b] * s[v];
                }
            }
        }
        let mut un = *u;
        for k in 0..=degree {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let scale = 2.0 * k as f64 + 1.0;
            for v in 0..N {
                let mut volume = 0.0;
                let mut src = 0.0;
                for a in 0..=degree {
                    volume += t.weights[a] * t.legendre_deriv[a][k] * flux_avg[a][v];
                    src += t.weights[a] * t.legendre[a][k] * src_avg[a][v];
                }
                let surface = fr[v] - sign * fl[v];
                un[k][v] += scale * (lam * (volume - surface) + dt * src);
            }
        }
        if un.iter().take(degree + 1).flatten().any(|x| !x.is_finite()) {
            return Err(SolverError::NonFinite(format!("DG modes in cell {i}")));
        }
        out.push(un);
    }
    Ok(out)
}

/// Time step `C dx / S_max` (divided by `2m + 1` for DG), clipped so that
/// `time + dt` does not pass `t_end`.
pub fn timestep<const N: usize, P: PdeModel<N>>(
    model: &P,
    grid: &Grid,
    state: &FieldState<N>,
    cfl: f64,
    dg_degree: Option<usize>,
    t_end: f64,
) -> Result<f64> {
    let smax = max_wavespeed(model, state)?;
    if smax <= 0.0 {
        return Err(SolverError::ZeroWaveSpeed);
    }
    let mut dt = cfl * grid.dx / smax;
    if let Some(m) = dg_degree {
        dt /= 2.0 * m as f64 + 1.0;
    }
    let remaining = t_end - state.time;
    if dt >= remaining {
        dt = remaining;
    }
    Ok(dt)
}

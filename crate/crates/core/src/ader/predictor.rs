//! Local space-time DG predictor.
//!
//! On the reference element `(xi, tau) in [0,1]^2` of cell `i` the predictor
//! solves `dW/dtau + (dt/dx) dF(W)/dxi = dt S(W)` weakly in time, with the
//! reconstruction as upwind data at `tau = 0`. `W` is a tensor-product
//! Lagrange polynomial through the `(m+1) x (m+1)` Gauss-Legendre nodes and
//! the nonlinear system is solved by Picard iteration.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Result, SolverError};
use crate::models::PdeModel;
use crate::poly::{
    gauss_legendre, legendre_derivatives, legendre_values, ReconstructionPolynomial, MAX_DEGREE,
    MAX_MODES,
};

const PICARD_TOLERANCE: f64 = 1e-12;

/// Node-based operators of the degree-`m` predictor.
#[derive(Debug, Clone)]
pub struct PredictorTables {
    pub degree: usize,
    /// Gauss-Legendre nodes on `[0, 1]`, shared by space and time.
    pub nodes: [f64; MAX_MODES],
    pub weights: [f64; MAX_MODES],
    /// `diff[k][a] = phi_a'(xi_k)`
    pub diff: [[f64; MAX_MODES]; MAX_MODES],
    /// Inverse of `K[l][b] = psi_l(1) psi_b(1) - w_b psi_l'(tau_b)`.
    pub k_inv: [[f64; MAX_MODES]; MAX_MODES],
    /// `phi_a(0)`
    pub at_zero: [f64; MAX_MODES],
    /// `phi_a(1)`
    pub at_one: [f64; MAX_MODES],
    /// `legendre[a][k] = L_k(xi_a)`
    pub legendre: [[f64; MAX_MODES]; MAX_MODES],
    /// `legendre_deriv[a][k] = L_k'(xi_a)`
    pub legendre_deriv: [[f64; MAX_MODES]; MAX_MODES],
}

fn lagrange(nodes: &[f64], a: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != a)
        .map(|(_, &xc)| (x - xc) / (nodes[a] - xc))
        .product()
}

fn lagrange_derivative(nodes: &[f64], a: usize, x: f64) -> f64 {
    let mut total = 0.0;
    for (skip, &xs) in nodes.iter().enumerate() {
        if skip == a {
            continue;
        }
        let mut term = 1.0 / (nodes[a] - xs);
        for (c, &xc) in nodes.iter().enumerate() {
            if c != a && c != skip {
                term *= (x - xc) / (nodes[a] - xc);
            }
        }
        total += term;
    }
    total
}

impl PredictorTables {
    fn build(degree: usize) -> Result<Self> {
        let n = degree + 1;
        let rule = gauss_legendre(n)?;
        let mut nodes = [0.0; MAX_MODES];
        let mut weights = [0.0; MAX_MODES];
        nodes[..n].copy_from_slice(&rule.nodes);
        weights[..n].copy_from_slice(&rule.weights);
        let x = &rule.nodes;

        let mut diff = [[0.0; MAX_MODES]; MAX_MODES];
        let mut at_zero = [0.0; MAX_MODES];
        let mut at_one = [0.0; MAX_MODES];
        let mut legendre = [[0.0; MAX_MODES]; MAX_MODES];
        let mut legendre_deriv = [[0.0; MAX_MODES]; MAX_MODES];
        for a in 0..n {
            at_zero[a] = lagrange(x, a, 0.0);
            at_one[a] = lagrange(x, a, 1.0);
            for k in 0..n {
                diff[k][a] = lagrange_derivative(x, a, x[k]);
            }
            let lv = legendre_values(x[a]);
            let ld = legendre_derivatives(x[a]);
            legendre[a][..n].copy_from_slice(&lv[..n]);
            legendre_deriv[a][..n].copy_from_slice(&ld[..n]);
        }

        let mut k = DMatrix::zeros(n, n);
        for l in 0..n {
            for b in 0..n {
                k[(l, b)] = at_one[l] * at_one[b] - weights[b] * diff[b][l];
            }
        }
        let inv = k
            .try_inverse()
            .ok_or_else(|| SolverError::Singular(format!("predictor time matrix, degree {degree}")))?;
        let mut k_inv = [[0.0; MAX_MODES]; MAX_MODES];
        for (r, row) in k_inv.iter_mut().enumerate().take(n) {
            for (c, v) in row.iter_mut().enumerate().take(n) {
                *v = inv[(r, c)];
            }
        }
        Ok(PredictorTables {
            degree,
            nodes,
            weights,
            diff,
            k_inv,
            at_zero,
            at_one,
            legendre,
            legendre_deriv,
        })
    }
}

/// Tables for degrees `0 ..= MAX_DEGREE`.
pub fn predictor_tables(degree: usize) -> &'static PredictorTables {
    static TABLES: OnceLock<Vec<PredictorTables>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        (0..=MAX_DEGREE)
            .map(|m| PredictorTables::build(m).expect("Gauss-Legendre time matrix is invertible"))
            .collect()
    });
    &all[degree]
}

/// Nodal values `W(xi_a, tau_b)` of the predictor in one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePredictor<const N: usize> {
    pub degree: usize,
    /// `values[a][b]` at space node `a`, time node `b`.
    pub values: [[[f64; N]; MAX_MODES]; MAX_MODES],
}

impl<const N: usize> SpaceTimePredictor<N> {
    fn tables(&self) -> &'static PredictorTables {
        predictor_tables(self.degree)
    }

    /// `W(0, tau_b)`, the trace on the left cell edge.
    #[inline]
    pub fn left_trace(&self, b: usize) -> [f64; N] {
        self.trace(&self.tables().at_zero, b)
    }

    /// `W(1, tau_b)`, the trace on the right cell edge.
    #[inline]
    pub fn right_trace(&self, b: usize) -> [f64; N] {
        self.trace(&self.tables().at_one, b)
    }

    #[inline]
    fn trace(&self, basis: &[f64; MAX_MODES], b: usize) -> [f64; N] {
        let mut out = [0.0; N];
        for a in 0..=self.degree {
            for v in 0..N {
                out[v] += basis[a] * self.values[a][b][v];
            }
        }
        out
    }

    /// `W(1, 1)` when `right`, else `W(0, 1)`.
    pub fn end_trace(&self, right: bool) -> [f64; N] {
        let t = self.tables();
        let space = if right { &t.at_one } else { &t.at_zero };
        let mut out = [0.0; N];
        for a in 0..=self.degree {
            for b in 0..=self.degree {
                let w = space[a] * t.at_one[b];
                for v in 0..N {
                    out[v] += w * self.values[a][b][v];
                }
            }
        }
        out
    }

    /// `W(xi, tau)` anywhere in the reference element.
    pub fn eval(&self, xi: f64, tau: f64) -> [f64; N] {
        let t = self.tables();
        let x = &t.nodes[..=self.degree];
        let mut out = [0.0; N];
        for a in 0..=self.degree {
            let pa = lagrange(x, a, xi);
            for b in 0..=self.degree {
                let w = pa * lagrange(x, b, tau);
                for v in 0..N {
                    out[v] += w * self.values[a][b][v];
                }
            }
        }
        out
    }
}

fn check_nodes<const N: usize, P: PdeModel<N>>(
    model: &P,
    values: &[[[f64; N]; MAX_MODES]; MAX_MODES],
    n: usize,
    cell: usize,
) -> Result<()> {
    for row in values.iter().take(n) {
        for q in row.iter().take(n) {
            if q.iter().any(|x| !x.is_finite()) {
                return Err(SolverError::NonFinite(format!("predictor in cell {cell}")));
            }
            if !model.is_admissible(q) {
                return Err(SolverError::Inadmissible {
                    cell,
                    detail: model.describe_inadmissible(q),
                });
            }
        }
    }
    Ok(())
}

/// Space-time predictor of cell `p.cell` over a step of length `dt`.
pub fn det_predictor<const N: usize, P: PdeModel<N>>(
    model: &P,
    p: &ReconstructionPolynomial<N>,
    dt: f64,
) -> Result<SpaceTimePredictor<N>> {
    let m = p.degree;
    if m > MAX_DEGREE {
        return Err(SolverError::InvalidArgument(format!("predictor degree {m}")));
    }
    let n = m + 1;
    let t = predictor_tables(m);
    let courant = dt / p.dx;

    let mut initial = [[0.0; N]; MAX_MODES];
    for (a, q) in initial.iter_mut().enumerate().take(n) {
        *q = p.eval(t.nodes[a]);
    }
    let mut values = [[[0.0; N]; MAX_MODES]; MAX_MODES];
    for a in 0..n {
        for b in 0..n {
            values[a][b] = initial[a];
        }
    }
    check_nodes(model, &values, n, p.cell)?;

    match n {
        1 => picard::<N, 1, P>(model, t, &initial, &mut values, courant, dt),
        2 => picard::<N, 2, P>(model, t, &initial, &mut values, courant, dt),
        3 => picard::<N, 3, P>(model, t, &initial, &mut values, courant, dt),
        4 => picard::<N, 4, P>(model, t, &initial, &mut values, courant, dt),
        _ => picard::<N, 5, P>(model, t, &initial, &mut values, courant, dt),
    }
    check_nodes(model, &values, n, p.cell)?;
    Ok(SpaceTimePredictor { degree: m, values })
}

/// Picard iteration with the node count `K` fixed at compile time.
fn picard<const N: usize, const K: usize, P: PdeModel<N>>(
    model: &P,
    t: &PredictorTables,
    initial: &[[f64; N]; MAX_MODES],
    values: &mut [[[f64; N]; MAX_MODES]; MAX_MODES],
    courant: f64,
    dt: f64,
) {
    let n = K;
    let source = model.has_source();
    let mut flux = [[[0.0; N]; K]; K];
    let mut src = [[[0.0; N]; K]; K];
    for _ in 0..n {
        for a in 0..n {
            for b in 0..n {
                flux[a][b] = model.flux(&values[a][b]);
                if source {
                    src[a][b] = model.source(&values[a][b]);
                }
            }
        }
        let mut change = 0.0_f64;
        let mut scale = 1.0_f64;
        for k in 0..n {
            let mut rhs = [[0.0; N]; K];
            for l in 0..n {
                let mut dflux = [0.0; N];
                for a in 0..n {
                    let d = t.diff[k][a];
                    for v in 0..N {
                        dflux[v] += d * flux[a][l][v];
                    }
                }
                for v in 0..N {
                    rhs[l][v] = t.at_zero[l] * initial[k][v] - t.weights[l] * courant * dflux[v];
                    if source {
                        rhs[l][v] += dt * t.weights[l] * src[k][l][v];
                    }
                }
            }
            for b in 0..n {
                let mut w = [0.0; N];
                for l in 0..n {
                    let c = t.k_inv[b][l];
                    for v in 0..N {
                        w[v] += c * rhs[l][v];
                    }
                }
                for v in 0..N {
                    change = change.max((w[v] - values[k][b][v]).abs());
                    scale = scale.max(w[v].abs());
                }
                values[k][b] = w;
            }
        }
        if change < PICARD_TOLERANCE * scale {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Advection;
    use crate::poly::LegendrePoly;

    fn scalar_poly(p: LegendrePoly, dx: f64) -> ReconstructionPolynomial<1> {
        let mut r = ReconstructionPolynomial::constant(p.degree, 0, dx, [0.0]);
        r.set_component(0, &p);
        r
    }

    #[test]
    fn constant_is_fixed_point() {
        let model = Advection::new(1.0).unwrap();
        for m in 0..=4 {
            let p = scalar_poly(LegendrePoly::constant(m, 3.0), 0.1);
            let w = det_predictor(&model, &p, 0.05).unwrap();
            for a in 0..=m {
                for b in 0..=m {
                    assert!((w.values[a][b][0] - 3.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn linear_advection_shift_is_exact() {
        let model = Advection::new(1.0).unwrap();
        let dx = 0.1;
        let dt = 0.07;
        for m in 1..=4 {
            let mut c = [0.0; MAX_MODES];
            for (k, ck) in c.iter_mut().enumerate().take(m + 1) {
                *ck = 0.3 + 0.2 * k as f64;
            }
            let poly = LegendrePoly::new(m, c);
            let w = det_predictor(&model, &scalar_poly(poly, dx), dt).unwrap();
            for &(xi, tau) in &[(0.0, 0.0), (0.3, 0.5), (1.0, 1.0), (0.5, 0.9)] {
                let exact = poly.eval(xi - dt / dx * tau);
                assert!((w.eval(xi, tau)[0] - exact).abs() < 1e-12, "m = {m}");
            }
        }
    }

    #[test]
    fn decay_source_matches_exponential() {
        // q_t = -q: W(tau) approximates exp(-dt tau) with error O(dt^{2m+2}) at tau = 1
        let model = Advection::with_decay(0.0, 1.0).unwrap();
        let dt = 0.2;
        for m in 1..=4 {
            let p = scalar_poly(LegendrePoly::constant(m, 1.0), 1.0);
            let w = det_predictor(&model, &p, dt).unwrap();
            let err = (w.eval(0.5, 1.0)[0] - (-dt).exp()).abs();
            assert!(err < 10.0 * dt.powi(m as i32 + 2), "m = {m}: {err}");
        }
    }

    #[test]
    fn lagrange_derivative_matches_difference() {
        let x = [0.1, 0.4, 0.8];
        for a in 0..3 {
            let h = 1e-6;
            let fd = (lagrange(&x, a, 0.5 + h) - lagrange(&x, a, 0.5 - h)) / (2.0 * h);
            assert!((fd - lagrange_derivative(&x, a, 0.5)).abs() < 1e-8);
        }
    }
}

//! Shifted Legendre basis on the reference cell `[0, 1]`, modal polynomial
//! algebra and Gauss-Legendre quadrature.
//!
//! A cell `[x_{i-1/2}, x_{i+1/2}]` is mapped to `xi in [0, 1]` through
//! `x = x_{i-1/2} + xi * dx`. Mode `k` is `L_k(xi) = P_k(2 xi - 1)`, so mode 0
//! has unit mean and all higher modes have zero mean over the cell. Neighbour
//! cells are the intervals `[-1, 0]` and `[1, 2]` of the same coordinate; the
//! modal formulas below are exact there too.

use crate::error::{Result, SolverError};

/// Highest polynomial degree supported by the schemes.
pub const MAX_DEGREE: usize = 4;
/// Number of modes of a degree-`MAX_DEGREE` polynomial.
pub const MAX_MODES: usize = MAX_DEGREE + 1;

/// Gauss-Legendre rule on `[0, 1]`; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Approximates `int_0^1 f(xi) dxi`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]`, nodes in ascending order.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if !(1..=10).contains(&n) {
        return Err(SolverError::InvalidArgument(format!(
            "Gauss-Legendre rule supports 1..=10 points, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Newton iteration on P_n starting from the Tricomi estimate.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; mirror for the symmetric partner.
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    Ok(QuadratureRule { nodes, weights })
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values of `L_0 .. L_{MAX_MODES}` at `xi` (one more than the basis size,
/// needed by the antiderivative formula).
pub fn legendre_values(xi: f64) -> [f64; MAX_MODES + 1] {
    let s = 2.0 * xi - 1.0;
    let mut v = [0.0; MAX_MODES + 1];
    v[0] = 1.0;
    v[1] = s;
    for k in 1..MAX_MODES {
        let kf = k as f64;
        v[k + 1] = ((2.0 * kf + 1.0) * s * v[k] - kf * v[k - 1]) / (kf + 1.0);
    }
    v
}

/// `d L_k / d xi` at `xi` for every mode.
pub fn legendre_derivatives(xi: f64) -> [f64; MAX_MODES] {
    let v = legendre_values(xi);
    let mut d = [0.0; MAX_MODES];
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k, and d/dxi = 2 d/ds.
    let mut dp = [0.0; MAX_MODES + 1];
    for k in 0..MAX_MODES {
        let prev = if k >= 1 { dp[k - 1] } else { 0.0 };
        dp[k + 1] = prev + (2.0 * k as f64 + 1.0) * v[k];
    }
    for k in 0..MAX_MODES {
        d[k] = 2.0 * dp[k];
    }
    d
}

/// `int_a^b L_k(xi) dxi` for every mode, exact for any real `a`, `b`.
pub fn legendre_integrals(a: f64, b: f64) -> [f64; MAX_MODES] {
    let va = legendre_values(a);
    let vb = legendre_values(b);
    let mut out = [0.0; MAX_MODES];
    out[0] = b - a;
    for k in 1..MAX_MODES {
        let denom = 2.0 * (2.0 * k as f64 + 1.0);
        out[k] = ((vb[k + 1] - vb[k - 1]) - (va[k + 1] - va[k - 1])) / denom;
    }
    out
}

/// Scalar polynomial of degree `degree` in modal (shifted Legendre) form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendrePoly {
    pub degree: usize,
    pub coeffs: [f64; MAX_MODES],
}

impl LegendrePoly {
    pub fn new(degree: usize, coeffs: [f64; MAX_MODES]) -> Self {
        debug_assert!(degree <= MAX_DEGREE);
        LegendrePoly { degree, coeffs }
    }

    pub fn constant(degree: usize, value: f64) -> Self {
        let mut coeffs = [0.0; MAX_MODES];
        coeffs[0] = value;
        LegendrePoly { degree, coeffs }
    }

    pub fn modes(&self) -> &[f64] {
        &self.coeffs[..=self.degree]
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let v = legendre_values(xi);
        self.modes().iter().zip(v.iter()).map(|(c, l)| c * l).sum()
    }

    /// Mean of the polynomial over `[a, b]` in reference coordinates.
    pub fn mean(&self, a: f64, b: f64) -> f64 {
        let ints = legendre_integrals(a, b);
        let s: f64 = self.modes().iter().zip(ints.iter()).map(|(c, l)| c * l).sum();
        s / (b - a)
    }

    /// Derivative of order `order` with respect to `xi`, still in modal form.
    pub fn derivative_ref(&self, order: usize) -> LegendrePoly {
        let mut c = self.coeffs;
        for _ in 0..order {
            let mut d = [0.0; MAX_MODES];
            for (k, dk) in d.iter_mut().enumerate().take(self.degree + 1) {
                // sum_{j > k, j - k odd} c_j, times (2k+1), times 2 for d/dxi
                let mut s = 0.0;
                let mut j = k + 1;
                while j <= self.degree {
                    s += c[j];
                    j += 2;
                }
                *dk = 2.0 * (2.0 * k as f64 + 1.0) * s;
            }
            c = d;
        }
        LegendrePoly {
            degree: self.degree,
            coeffs: c,
        }
    }

    /// Derivative of order `order` with respect to the physical coordinate.
    pub fn derivative(&self, order: usize, dx: f64) -> LegendrePoly {
        let mut d = self.derivative_ref(order);
        let scale = dx.powi(-(order as i32));
        d.coeffs.iter_mut().for_each(|c| *c *= scale);
        d
    }

    /// `int_0^1 p(xi)^2 dxi`, exact through orthogonality.
    pub fn square_integral(&self) -> f64 {
        self.modes()
            .iter()
            .enumerate()
            .map(|(k, c)| c * c / (2.0 * k as f64 + 1.0))
            .sum()
    }

    /// Fits a degree-`degree` polynomial from its values at the
    /// `degree + 1` Gauss nodes (exact inverse of nodal sampling).
    pub fn from_gauss_values(degree: usize, values: &[f64]) -> Result<LegendrePoly> {
        let rule = gauss_legendre(degree + 1)?;
        if values.len() != rule.len() {
            return Err(SolverError::InvalidArgument(format!(
                "expected {} nodal values, got {}",
                rule.len(),
                values.len()
            )));
        }
        let mut coeffs = [0.0; MAX_MODES];
        for (g, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let l = legendre_values(x);
            for k in 0..=degree {
                coeffs[k] += (2.0 * k as f64 + 1.0) * w * values[g] * l[k];
            }
        }
        Ok(LegendrePoly { degree, coeffs })
    }
}

/// Vector-valued polynomial on one cell: the reconstructed data `p_i(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionPolynomial<const N: usize> {
    pub degree: usize,
    pub cell: usize,
    pub dx: f64,
    /// `coeffs[k][v]` is mode `k` of component `v`.
    pub coeffs: [[f64; N]; MAX_MODES],
}

impl<const N: usize> ReconstructionPolynomial<N> {
    pub fn constant(degree: usize, cell: usize, dx: f64, value: [f64; N]) -> Self {
        let mut coeffs = [[0.0; N]; MAX_MODES];
        coeffs[0] = value;
        ReconstructionPolynomial {
            degree,
            cell,
            dx,
            coeffs,
        }
    }

    pub fn component(&self, v: usize) -> LegendrePoly {
        let mut c = [0.0; MAX_MODES];
        for k in 0..=self.degree {
            c[k] = self.coeffs[k][v];
        }
        LegendrePoly::new(self.degree, c)
    }

    pub fn set_component(&mut self, v: usize, p: &LegendrePoly) {
        for k in 0..MAX_MODES {
            self.coeffs[k][v] = if k <= self.degree { p.coeffs[k] } else { 0.0 };
        }
    }

    pub fn eval(&self, xi: f64) -> [f64; N] {
        let l = legendre_values(xi);
        let mut out = [0.0; N];
        for k in 0..=self.degree {
            for v in 0..N {
                out[v] += self.coeffs[k][v] * l[k];
            }
        }
        out
    }

    /// Cell mean, i.e. mode 0.
    pub fn cell_mean(&self) -> [f64; N] {
        self.coeffs[0]
    }

    pub fn mean(&self, a: f64, b: f64) -> [f64; N] {
        let mut out = [0.0; N];
        for (v, o) in out.iter_mut().enumerate() {
            *o = self.component(v).mean(a, b);
        }
        out
    }

    /// Physical-coordinate derivative of the given order.
    pub fn derivative(&self, order: usize) -> ReconstructionPolynomial<N> {
        let mut out = *self;
        for v in 0..N {
            let d = self.component(v).derivative(order, self.dx);
            out.set_component(v, &d);
        }
        out
    }
}

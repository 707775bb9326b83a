//! PDE models `dQ/dt + dF(Q)/dx = S(Q)`: flux, source, eigenstructure and
//! admissibility for scalar linear advection and the ideal-gas Euler equations.

use crate::error::{Result, SolverError};
use crate::mesh::FieldState;
use crate::riemann::{advection_rp, trrs_state, PrimitiveState};

/// Right eigenvectors (columns of `right`) and their inverse `left`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenbasis<const N: usize> {
    pub right: [[f64; N]; N],
    pub left: [[f64; N]; N],
}

impl<const N: usize> Eigenbasis<N> {
    pub fn identity() -> Self {
        let mut id = [[0.0; N]; N];
        for (k, row) in id.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Eigenbasis {
            right: id,
            left: id,
        }
    }

    /// Characteristic variables `w = R^{-1} v`.
    #[inline]
    pub fn project(&self, v: &[f64; N]) -> [f64; N] {
        mat_vec(&self.left, v)
    }

    /// Conserved variables `v = R w`.
    #[inline]
    pub fn unproject(&self, w: &[f64; N]) -> [f64; N] {
        mat_vec(&self.right, w)
    }
}

#[inline]
fn mat_vec<const N: usize>(a: &[[f64; N]; N], v: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
    out
}

/// A hyperbolic balance law with `N` conserved variables.
pub trait PdeModel<const N: usize>: Sync + Send {
    fn flux(&self, q: &[f64; N]) -> [f64; N];

    fn source(&self, _q: &[f64; N]) -> [f64; N] {
        [0.0; N]
    }

    /// Lets the schemes skip source quadrature for homogeneous problems.
    fn has_source(&self) -> bool {
        false
    }

    /// Eigenvalues of the flux Jacobian in ascending order.
    fn eigenvalues(&self, q: &[f64; N]) -> [f64; N];

    fn eigenbasis(&self, q: &[f64; N]) -> Result<Eigenbasis<N>>;

    fn is_admissible(&self, q: &[f64; N]) -> bool;

    /// State at `x/t = 0` of the classical Riemann problem with data `ql | qr`.
    fn godunov_state(&self, ql: &[f64; N], qr: &[f64; N]) -> Result<[f64; N]>;

    /// Largest `|lambda_j(q)|`.
    fn max_abs_eigenvalue(&self, q: &[f64; N]) -> f64 {
        self.eigenvalues(q)
            .iter()
            .fold(0.0, |acc: f64, l| acc.max(l.abs()))
    }

    /// Whether characteristic projection is the identity (scalar problems).
    fn is_scalar(&self) -> bool {
        N == 1
    }

    fn describe_inadmissible(&self, q: &[f64; N]) -> String {
        format!("state {q:?} is not admissible")
    }
}

/// `S_max = max_{i,j} |lambda_j(Q_i)|`.
pub fn max_wavespeed<const N: usize, P: PdeModel<N>>(model: &P, state: &FieldState<N>) -> Result<f64> {
    let mut s: f64 = 0.0;
    for (i, q) in state.averages.iter().enumerate() {
        if !model.is_admissible(q) {
            return Err(SolverError::Inadmissible {
                cell: i,
                detail: model.describe_inadmissible(q),
            });
        }
        s = s.max(model.max_abs_eigenvalue(q));
    }
    Ok(s)
}

/// Projects `values` onto the characteristic variables of `reference`.
pub fn char_project<const N: usize, P: PdeModel<N>>(
    model: &P,
    reference: &[f64; N],
    values: &[f64; N],
) -> Result<[f64; N]> {
    Ok(model.eigenbasis(reference)?.project(values))
}

/// Inverse of [`char_project`].
pub fn char_unproject<const N: usize, P: PdeModel<N>>(
    model: &P,
    reference: &[f64; N],
    values: &[f64; N],
) -> Result<[f64; N]> {
    Ok(model.eigenbasis(reference)?.unproject(values))
}

/// `dq/dt + lambda dq/dx = -decay * q`.
///
/// `decay = 0` is the homogeneous advection equation; a positive decay rate
/// exercises the source-term path of the schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Advection {
    pub lambda: f64,
    pub decay: f64,
}

impl Advection {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(SolverError::InvalidArgument(format!(
                "advection speed must be finite, got {lambda}"
            )));
        }
        Ok(Advection { lambda, decay: 0.0 })
    }

    pub fn with_decay(lambda: f64, decay: f64) -> Result<Self> {
        let mut m = Self::new(lambda)?;
        m.decay = decay;
        Ok(m)
    }
}

/// Constructor mirroring the other model factories.
pub fn advection_model(lambda: f64) -> Result<Advection> {
    Advection::new(lambda)
}

impl PdeModel<1> for Advection {
    #[inline]
    fn flux(&self, q: &[f64; 1]) -> [f64; 1] {
        [self.lambda * q[0]]
    }

    #[inline]
    fn source(&self, q: &[f64; 1]) -> [f64; 1] {
        [-self.decay * q[0]]
    }

    fn has_source(&self) -> bool {
        self.decay != 0.0
    }

    fn eigenvalues(&self, _q: &[f64; 1]) -> [f64; 1] {
        [self.lambda]
    }

    fn eigenbasis(&self, _q: &[f64; 1]) -> Result<Eigenbasis<1>> {
        Ok(Eigenbasis::identity())
    }

    fn is_admissible(&self, q: &[f64; 1]) -> bool {
        q[0].is_finite()
    }

    #[inline]
    fn godunov_state(&self, ql: &[f64; 1], qr: &[f64; 1]) -> Result<[f64; 1]> {
        Ok([advection_rp(self.lambda, ql[0], qr[0])])
    }
}

/// One-dimensional Euler equations with the ideal-gas law
/// `e = p / ((gamma - 1) rho)`. Conserved variables are `(rho, rho u, E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub gamma: f64,
}

impl Euler {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(SolverError::InvalidArgument(format!(
                "ratio of specific heats must exceed 1, got {gamma}"
            )));
        }
        Ok(Euler { gamma })
    }

    #[inline]
    pub fn pressure(&self, q: &[f64; 3]) -> f64 {
        (self.gamma - 1.0) * (q[2] - 0.5 * q[1] * q[1] / q[0])
    }

    pub fn prim_to_cons(&self, w: &PrimitiveState) -> [f64; 3] {
        let e = w.p / ((self.gamma - 1.0) * w.rho);
        [w.rho, w.rho * w.u, w.rho * (0.5 * w.u * w.u + e)]
    }

    pub fn cons_to_prim(&self, q: &[f64; 3]) -> PrimitiveState {
        PrimitiveState {
            rho: q[0],
            u: q[1] / q[0],
            p: self.pressure(q),
        }
    }

    /// Validated conversion used by the Riemann interaction.
    pub fn checked_prim(&self, q: &[f64; 3]) -> Result<PrimitiveState> {
        let w = self.cons_to_prim(q);
        if !(w.rho > 0.0 && w.p > 0.0 && w.u.is_finite()) {
            return Err(SolverError::InadmissibleData(format!("rho = {}, p = {}", w.rho, w.p)));
        }
        Ok(w)
    }

    pub fn sound_speed(&self, w: &PrimitiveState) -> f64 {
        (self.gamma * w.p / w.rho).sqrt()
    }
}

/// Constructor mirroring [`advection_model`].
pub fn euler_model(gamma: f64) -> Result<Euler> {
    Euler::new(gamma)
}

impl PdeModel<3> for Euler {
    #[inline]
    fn flux(&self, q: &[f64; 3]) -> [f64; 3] {
        let u = q[1] / q[0];
        let p = self.pressure(q);
        [q[1], q[1] * u + p, u * (q[2] + p)]
    }

    fn eigenvalues(&self, q: &[f64; 3]) -> [f64; 3] {
        let w = self.cons_to_prim(q);
        let a = self.sound_speed(&w);
        [w.u - a, w.u, w.u + a]
    }

    fn eigenbasis(&self, q: &[f64; 3]) -> Result<Eigenbasis<3>> {
        if !self.is_admissible(q) {
            return Err(SolverError::Singular(format!(
                "Euler eigenbasis requested at inadmissible state {q:?}"
            )));
        }
        let g = self.gamma;
        let w = self.cons_to_prim(q);
        let u = w.u;
        let a = self.sound_speed(&w);
        let h = (q[2] + w.p) / w.rho;
        let right = [
            [1.0, 1.0, 1.0],
            [u - a, u, u + a],
            [h - u * a, 0.5 * u * u, h + u * a],
        ];
        let b1 = (g - 1.0) / (a * a);
        let b2 = 0.5 * b1 * u * u;
        let left = [
            [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), 0.5 * b1],
        ];
        Ok(Eigenbasis { right, left })
    }

    #[inline]
    fn is_admissible(&self, q: &[f64; 3]) -> bool {
        q[0] > 0.0 && q.iter().all(|x| x.is_finite()) && self.pressure(q) > 0.0
    }

    fn godunov_state(&self, ql: &[f64; 3], qr: &[f64; 3]) -> Result<[f64; 3]> {
        let wl = self.checked_prim(ql)?;
        let wr = self.checked_prim(qr)?;
        let w = trrs_state(self.gamma, &wl, &wr)?;
        Ok(self.prim_to_cons(&w))
    }

    fn describe_inadmissible(&self, q: &[f64; 3]) -> String {
        format!("rho = {:e}, p = {:e}", q[0], self.pressure(q))
    }
}

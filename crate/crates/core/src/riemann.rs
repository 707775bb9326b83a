//! Classical Riemann solvers: exact upwinding for linear advection, the
//! two-rarefaction approximation (TRRS) for the Euler equations, and an exact
//! iterative Euler solver used as a reference.

use crate::error::{Result, SolverError};
use crate::models::PdeModel;

/// Primitive Euler state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        PrimitiveState { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }

    /// Mirror image under `x -> -x`.
    pub fn mirrored(&self) -> Self {
        PrimitiveState::new(self.rho, -self.u, self.p)
    }
}

/// Interface value of `q_t + lambda q_x = 0` with data `ql | qr`.
/// A zero speed returns the arithmetic mean.
#[inline]
pub fn advection_rp(lambda: f64, ql: f64, qr: f64) -> f64 {
    if lambda > 0.0 {
        ql
    } else if lambda < 0.0 {
        qr
    } else {
        0.5 * (ql + qr)
    }
}

/// Star-region pressure and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p: f64,
    pub u: f64,
}

fn check_data(gamma: f64, wl: &PrimitiveState, wr: &PrimitiveState) -> Result<(f64, f64)> {
    for (side, w) in [("left", wl), ("right", wr)] {
        if !(w.rho > 0.0 && w.p > 0.0 && w.u.is_finite()) {
            return Err(SolverError::InadmissibleData(format!(
                "{side} state rho = {}, p = {}",
                w.rho, w.p
            )));
        }
    }
    let al = wl.sound_speed(gamma);
    let ar = wr.sound_speed(gamma);
    let critical = 2.0 / (gamma - 1.0) * (al + ar) - (wr.u - wl.u);
    if critical <= 0.0 {
        return Err(SolverError::Vacuum { margin: -critical });
    }
    Ok((al, ar))
}

/// Closed-form two-rarefaction star state.
pub fn trrs_star(gamma: f64, wl: &PrimitiveState, wr: &PrimitiveState) -> Result<StarState> {
    let (al, ar) = check_data(gamma, wl, wr)?;
    let z = (gamma - 1.0) / (2.0 * gamma);
    let (pl_z, pr_z) = (wl.p.powf(z), wr.p.powf(z));
    let num = al + ar - 0.5 * (gamma - 1.0) * (wr.u - wl.u);
    // p^z of the star pressure, reused by both rarefaction functions
    let p_z = num / (al / pl_z + ar / pr_z);
    let p = p_z.powf(1.0 / z);
    let g = 2.0 / (gamma - 1.0);
    let fl = g * al * (p_z / pl_z - 1.0);
    let fr = g * ar * (p_z / pr_z - 1.0);
    let u = 0.5 * (wl.u + wr.u) + 0.5 * (fr - fl);
    Ok(StarState { p, u })
}

/// Two-rarefaction Riemann solver sampled at `x/t = 0`. Both nonlinear waves
/// are treated as rarefactions regardless of the star pressure.
pub fn trrs_state(gamma: f64, wl: &PrimitiveState, wr: &PrimitiveState) -> Result<PrimitiveState> {
    let star = trrs_star(gamma, wl, wr)?;
    Ok(sample(gamma, wl, wr, &star, 0.0, false, false))
}

fn pressure_function(gamma: f64, p: f64, w: &PrimitiveState, a: f64) -> (f64, f64) {
    if p > w.p {
        let ak = 2.0 / ((gamma + 1.0) * w.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * w.p;
        let q = (ak / (bk + p)).sqrt();
        (
            (p - w.p) * q,
            q * (1.0 - 0.5 * (p - w.p) / (bk + p)),
        )
    } else {
        let z = (gamma - 1.0) / (2.0 * gamma);
        let r = p / w.p;
        (
            2.0 * a / (gamma - 1.0) * (r.powf(z) - 1.0),
            r.powf(-(gamma + 1.0) / (2.0 * gamma)) / (w.rho * a),
        )
    }
}

/// Exact star state by Newton iteration on the pressure function.
pub fn exact_star(gamma: f64, wl: &PrimitiveState, wr: &PrimitiveState) -> Result<StarState> {
    const MAX_ITER: usize = 100;
    const TOL: f64 = 1e-12;
    let (al, ar) = check_data(gamma, wl, wr)?;
    let du = wr.u - wl.u;

    let cup = 0.25 * (wl.rho + wr.rho) * (al + ar);
    let ppv = (0.5 * (wl.p + wr.p) - 0.5 * du * cup).max(0.0);
    let pmin = wl.p.min(wr.p);
    let pmax = wl.p.max(wr.p);
    let mut p = if pmax / pmin <= 2.0 && ppv >= pmin && ppv <= pmax {
        ppv
    } else if ppv < pmin {
        trrs_star(gamma, wl, wr)?.p
    } else {
        let g5 = 2.0 / (gamma + 1.0);
        let g6 = (gamma - 1.0) / (gamma + 1.0);
        let gl = ((g5 / wl.rho) / (g6 * wl.p + ppv)).sqrt();
        let gr = ((g5 / wr.rho) / (g6 * wr.p + ppv)).sqrt();
        (gl * wl.p + gr * wr.p - du) / (gl + gr)
    };
    p = p.max(1e-14 * pmin);

    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (fl, dfl) = pressure_function(gamma, p, wl, al);
        let (fr, dfr) = pressure_function(gamma, p, wr, ar);
        let mut next = p - (fl + fr + du) / (dfl + dfr);
        if next <= 0.0 {
            next = 1e-14 * pmin;
        }
        residual = (next - p).abs() / next;
        p = next;
        if residual < TOL {
            let (fl, _) = pressure_function(gamma, p, wl, al);
            let (fr, _) = pressure_function(gamma, p, wr, ar);
            let u = 0.5 * (wl.u + wr.u) + 0.5 * (fr - fl);
            return Ok(StarState { p, u });
        }
    }
    Err(SolverError::NoConvergence {
        iterations: MAX_ITER,
        residual,
    })
}

/// Speeds `x/t` at which the exact solution is not smooth: left wave head
/// and tail, contact, right wave tail and head. A shock has head = tail.
pub fn wave_speeds(gamma: f64, wl: &PrimitiveState, wr: &PrimitiveState) -> Result<[f64; 5]> {
    let star = exact_star(gamma, wl, wr)?;
    let z = (gamma - 1.0) / (2.0 * gamma);
    let shock = |w: &PrimitiveState, a: f64| ((gamma + 1.0) / (2.0 * gamma) * star.p / w.p + z).sqrt() * a;
    let al = wl.sound_speed(gamma);
    let ar = wr.sound_speed(gamma);
    let (lh, lt) = if star.p > wl.p {
        let s = wl.u - shock(wl, al);
        (s, s)
    } else {
        (wl.u - al, star.u - al * (star.p / wl.p).powf(z))
    };
    let (rt, rh) = if star.p > wr.p {
        let s = wr.u + shock(wr, ar);
        (s, s)
    } else {
        (star.u + ar * (star.p / wr.p).powf(z), wr.u + ar)
    };
    Ok([lh, lt, star.u, rt, rh])
}

/// Exact solution of the Euler Riemann problem sampled at `x/t = s`.
pub fn exact_euler_rp(
    gamma: f64,
    wl: &PrimitiveState,
    wr: &PrimitiveState,
    s: f64,
) -> Result<PrimitiveState> {
    let star = exact_star(gamma, wl, wr)?;
    Ok(sample(gamma, wl, wr, &star, s, star.p > wl.p, star.p > wr.p))
}

/// Samples the three-wave pattern at speed `s`. `left_shock`/`right_shock`
/// select the shock branch of the corresponding nonlinear wave.
fn sample(
    gamma: f64,
    wl: &PrimitiveState,
    wr: &PrimitiveState,
    star: &StarState,
    s: f64,
    left_shock: bool,
    right_shock: bool,
) -> PrimitiveState {
    let g5 = 2.0 / (gamma + 1.0);
    let g6 = (gamma - 1.0) / (gamma + 1.0);
    let z = (gamma - 1.0) / (2.0 * gamma);
    let (ps, us) = (star.p, star.u);
    if s <= us {
        let al = wl.sound_speed(gamma);
        let r = ps / wl.p;
        if left_shock {
            let sl = wl.u - al * ((gamma + 1.0) / (2.0 * gamma) * r + z).sqrt();
            if s <= sl {
                *wl
            } else {
                PrimitiveState::new(wl.rho * (r + g6) / (g6 * r + 1.0), us, ps)
            }
        } else {
            let head = wl.u - al;
            if s <= head {
                return *wl;
            }
            let tail = us - al * r.powf(z);
            if s > tail {
                PrimitiveState::new(wl.rho * r.powf(1.0 / gamma), us, ps)
            } else {
                let c = g5 + g6 / al * (wl.u - s);
                PrimitiveState::new(
                    wl.rho * c.powf(2.0 / (gamma - 1.0)),
                    g5 * (al + 0.5 * (gamma - 1.0) * wl.u + s),
                    wl.p * c.powf(2.0 * gamma / (gamma - 1.0)),
                )
            }
        }
    } else {
        let ar = wr.sound_speed(gamma);
        let r = ps / wr.p;
        if right_shock {
            let sr = wr.u + ar * ((gamma + 1.0) / (2.0 * gamma) * r + z).sqrt();
            if s >= sr {
                *wr
            } else {
                PrimitiveState::new(wr.rho * (r + g6) / (g6 * r + 1.0), us, ps)
            }
        } else {
            let head = wr.u + ar;
            if s >= head {
                return *wr;
            }
            let tail = us + ar * r.powf(z);
            if s <= tail {
                PrimitiveState::new(wr.rho * r.powf(1.0 / gamma), us, ps)
            } else {
                let c = g5 - g6 / ar * (wr.u - s);
                PrimitiveState::new(
                    wr.rho * c.powf(2.0 / (gamma - 1.0)),
                    g5 * (-ar + 0.5 * (gamma - 1.0) * wr.u + s),
                    wr.p * c.powf(2.0 * gamma / (gamma - 1.0)),
                )
            }
        }
    }
}

/// Physical flux of the Godunov state: `F(RP(ql, qr)(0))`.
pub fn godunov_flux<const N: usize, P: PdeModel<N>>(
    model: &P,
    ql: &[f64; N],
    qr: &[f64; N],
) -> Result<[f64; N]> {
    Ok(model.flux(&model.godunov_state(ql, qr)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOD_L: PrimitiveState = PrimitiveState::new(1.0, 0.0, 1.0);
    const SOD_R: PrimitiveState = PrimitiveState::new(0.125, 0.0, 0.1);
    const P123_L: PrimitiveState = PrimitiveState::new(1.0, -2.0, 0.4);
    const P123_R: PrimitiveState = PrimitiveState::new(1.0, 2.0, 0.4);

    #[test]
    fn advection_upwinding() {
        assert_eq!(advection_rp(1.0, 0.3, 0.7), 0.3);
        assert_eq!(advection_rp(-1.0, 0.3, 0.7), 0.7);
        assert_eq!(advection_rp(0.0, 0.3, 0.7), 0.5);
        for l in [-2.0, 0.0, 3.0] {
            assert_eq!(advection_rp(l, 1.25, 1.25), 1.25);
        }
    }

    #[test]
    fn trrs_equal_states() {
        let w = PrimitiveState::new(1.0, 0.0, 1.0);
        let s = trrs_state(1.4, &w, &w).unwrap();
        assert!((s.rho - 1.0).abs() < 1e-14);
        assert!(s.u.abs() < 1e-14);
        assert!((s.p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_sod_star_state() {
        let s = exact_star(1.4, &SOD_L, &SOD_R).unwrap();
        assert!((s.p - 0.30313).abs() < 5e-6, "p* = {}", s.p);
        assert!((s.u - 0.92745).abs() < 5e-6, "u* = {}", s.u);
    }

    #[test]
    fn trrs_sod_star_pressure_close_to_exact() {
        let exact = exact_star(1.4, &SOD_L, &SOD_R).unwrap();
        let trrs = trrs_star(1.4, &SOD_L, &SOD_R).unwrap();
        assert!((trrs.p - exact.p).abs() < 0.01, "{} vs {}", trrs.p, exact.p);
    }

    #[test]
    fn problem_123_is_symmetric() {
        let t = trrs_state(1.4, &P123_L, &P123_R).unwrap();
        assert_eq!(t.u, 0.0);
        let e = exact_euler_rp(1.4, &P123_L, &P123_R, 0.0).unwrap();
        assert!(e.u.abs() < 1e-14);
        // two rarefactions: the TRRS star state is exact here
        assert!((t.p - e.p).abs() < 1e-12 * e.p.max(1e-3));
    }

    #[test]
    fn exact_equal_states_everywhere() {
        let w = PrimitiveState::new(0.7, 0.3, 1.9);
        for s in [-5.0, -0.5, 0.0, 0.4, 5.0] {
            let r = exact_euler_rp(1.4, &w, &w, s).unwrap();
            assert!((r.rho - w.rho).abs() < 1e-12);
            assert!((r.u - w.u).abs() < 1e-12);
            assert!((r.p - w.p).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_generation_rejected() {
        let l = PrimitiveState::new(1.0, -20.0, 0.4);
        let r = PrimitiveState::new(1.0, 20.0, 0.4);
        assert!(matches!(trrs_state(1.4, &l, &r), Err(SolverError::Vacuum { .. })));
        assert!(matches!(
            exact_euler_rp(1.4, &l, &r, 0.0),
            Err(SolverError::Vacuum { .. })
        ));
    }

    #[test]
    fn sod_profile_regions() {
        // far left/right states untouched, contact moves right
        let l = exact_euler_rp(1.4, &SOD_L, &SOD_R, -2.0).unwrap();
        assert_eq!(l, SOD_L);
        let r = exact_euler_rp(1.4, &SOD_L, &SOD_R, 2.0).unwrap();
        assert_eq!(r, SOD_R);
        // between contact (0.927) and shock (1.752): post-shock density 0.26557
        let m = exact_euler_rp(1.4, &SOD_L, &SOD_R, 1.2).unwrap();
        assert!((m.rho - 0.26557).abs() < 1e-4);
        // between rarefaction tail and contact: 0.42632
        let c = exact_euler_rp(1.4, &SOD_L, &SOD_R, 0.5).unwrap();
        assert!((c.rho - 0.42632).abs() < 1e-4);
    }
}

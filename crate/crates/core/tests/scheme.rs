use std::f64::consts::PI;

use grprec_core::ader::predictor::det_predictor;
use grprec_core::mesh::error_norms;
use grprec_core::poly::{LegendrePoly, ReconstructionPolynomial, MAX_MODES};
use grprec_core::*;
use proptest::prelude::*;

/// CFL numbers at which every scheme is linearly stable; DG at orders 4 and 5
/// needs less than the finite-volume default.
fn stable_config(scheme: Scheme, order: usize) -> SchemeConfig {
    let cfg = SchemeConfig::new(scheme, order);
    match (scheme, order) {
        (Scheme::AderDg, 3) => cfg.with_cfl(0.8),
        (Scheme::AderDg, 4) => cfg.with_cfl(0.7),
        (Scheme::AderDg, 5) => cfg.with_cfl(0.5),
        _ => cfg,
    }
}

fn fourier(c: [f64; 4], x: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, a)| a * (2.0 * PI * (k + 1) as f64 * x + k as f64).sin())
        .sum()
}

fn step_n<const N: usize, P: PdeModel<N>>(s: &mut Solver<N, P>, n: usize) {
    for _ in 0..n {
        s.step(f64::INFINITY).unwrap();
    }
}

fn relative_drift<const N: usize>(a: [f64; N], b: [f64; N]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn advection_conserves_over_1000_steps(c in prop::array::uniform4(-0.5..0.5f64), shift in 0.5..2.0f64) {
        let grid = Grid::new(0.0, 1.0, 16, Boundary::Periodic).unwrap();
        for scheme in Scheme::ALL {
            for order in 2..=5 {
                let model = Advection::new(1.0).unwrap();
                let mut s = Solver::new(model, grid, stable_config(scheme, order), |x| [shift + fourier(c, x)], &[]).unwrap();
                let before = s.state().total(grid.dx);
                step_n(&mut s, 1000);
                let after = s.state().total(grid.dx);
                prop_assert!(relative_drift(before, after) < 1e-12, "{scheme} order {order}: {before:?} -> {after:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2))]

    #[test]
    fn euler_conserves_over_1000_steps(c in prop::array::uniform4(-0.05..0.05f64)) {
        let grid = Grid::new(0.0, 1.0, 12, Boundary::Periodic).unwrap();
        for scheme in Scheme::ALL {
            for order in 2..=5 {
                let model = Euler::new(1.4).unwrap();
                let ic = |x: f64| model.prim_to_cons(&PrimitiveState::new(1.0 + fourier(c, x), 1.0 + fourier(c, x + 0.3), 2.0));
                let mut s = Solver::new(model, grid, stable_config(scheme, order), ic, &[]).unwrap();
                let before = s.state().total(grid.dx);
                step_n(&mut s, 1000);
                let after = s.state().total(grid.dx);
                prop_assert!(relative_drift(before, after) < 1e-12, "{scheme} order {order}: {before:?} -> {after:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn predictor_shifts_advected_polynomials_exactly(
        m in 1usize..=4,
        c in prop::array::uniform5(-1.0..1.0f64),
        courant in 0.05..1.0f64,
        lambda in prop::sample::select(vec![-1.5f64, 1.0, 2.0]),
    ) {
        let dx = 0.1;
        let dt = courant * dx / lambda.abs();
        let mut coeffs = [0.0; MAX_MODES];
        coeffs[..=m].copy_from_slice(&c[..=m]);
        let poly = LegendrePoly::new(m, coeffs);
        let mut rec = ReconstructionPolynomial::constant(m, 0, dx, [0.0]);
        rec.set_component(0, &poly);
        let model = Advection::new(lambda).unwrap();
        let w = det_predictor(&model, &rec, dt).unwrap();
        for k in 0..=4 {
            for j in 0..=4 {
                let (xi, tau) = (0.25 * k as f64, 0.25 * j as f64);
                let exact = poly.eval(xi - lambda * dt / dx * tau);
                let err = (w.eval(xi, tau)[0] - exact).abs();
                prop_assert!(err < 1e-12 * exact.abs().max(1.0), "error {err:e} against {exact}");
            }
        }
    }

    #[test]
    fn norms_are_ordered(e in prop::collection::vec(-1.0..1.0f64, 4..64), length in 0.5..4.0f64) {
        let n = e.len();
        let dx = length / n as f64;
        let num: Vec<[f64; 1]> = e.iter().map(|&x| [x]).collect();
        let zero = vec![[0.0]; n];
        let [norm] = error_norms(&num, &zero, dx).unwrap();
        prop_assert!(norm.l1 <= length.sqrt() * norm.l2 * (1.0 + 1e-12));
        prop_assert!(norm.l2 <= length.sqrt() * norm.linf * (1.0 + 1e-12));
    }
}

#[test]
fn uniform_flow_is_preserved_by_every_scheme() {
    // The predictor stops once its Picard update falls below 1e-12, which sets
    // the noise floor.
    for boundary in [Boundary::Periodic, Boundary::Transmissive] {
        let grid = Grid::new(0.0, 1.0, 10, boundary).unwrap();
        let model = Euler::new(1.4).unwrap();
        let q = model.prim_to_cons(&PrimitiveState::new(0.7, -0.4, 1.3));
        for scheme in Scheme::ALL {
            for order in 2..=5 {
                let mut s = Solver::new(model, grid, stable_config(scheme, order), |_| q, &[]).unwrap();
                step_n(&mut s, 20);
                for avg in &s.state().averages {
                    for k in 0..3 {
                        let d = avg[k] - q[k];
                        assert!(d.abs() < 1e-11, "{boundary:?} {scheme} order {order}: {d:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn run_ends_exactly_at_requested_time() {
    let grid = Grid::new(-1.0, 1.0, 20, Boundary::Periodic).unwrap();
    for scheme in Scheme::ALL {
        let model = Advection::new(1.0).unwrap();
        let mut s = Solver::new(model, grid, stable_config(scheme, 3), |x| [(PI * x).sin()], &[]).unwrap();
        s.run(0.37).unwrap();
        assert_eq!(s.state().time, 0.37);
    }
}

#[test]
fn error_decreases_under_refinement() {
    for scheme in Scheme::ALL {
        for order in 2..=5 {
            let mut prev = f64::INFINITY;
            for m in [32, 64, 128] {
                let grid = Grid::new(-1.0, 1.0, m, Boundary::Periodic).unwrap();
                let model = Advection::new(1.0).unwrap();
                let ic = |x: f64| [(PI * x).sin().powi(4)];
                let mut s = Solver::new(model, grid, stable_config(scheme, order), ic, &[]).unwrap();
                s.run(0.5).unwrap();
                let exact = mesh::cell_averages(&grid, |x| ic(x - 0.5), 10, &[]).unwrap();
                let [e] = error_norms(&s.state().averages, &exact, grid.dx).unwrap();
                assert!(e.l1 < prev, "{scheme} order {order} M = {m}: {} after {prev}", e.l1);
                prev = e.l1;
            }
        }
    }
}

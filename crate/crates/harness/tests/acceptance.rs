//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Timings are sequential single-thread runs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use grprec_core::ader::det_predictor;
use grprec_core::models::PdeModel;
use grprec_core::poly::{LegendrePoly, ReconstructionPolynomial, MAX_MODES};
use grprec_core::reconstruction::{Knot, ReconstructionMethod, StencilData};
use grprec_core::riemann::{exact_star, godunov_flux, trrs_star};
use grprec_core::{Advection, Boundary, Euler, Grid, PrimitiveState, Scheme, SchemeConfig, Solver, SolverError};
use grprec_harness::driver::diagnostics;
use grprec_harness::profiles::riemann_profile;
use grprec_harness::study::{convergence_study, efficiency_series, frontier_dominates, ConvergenceRow};
use grprec_harness::{run, HarnessError, RunSpec, TestCase};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Errors below this are treated as round-off when picking the finest pair.
const ROUND_OFF_FLOOR: f64 = 1e-11;

/// CFL numbers of the DG runs for orders 2..=5; the higher orders are
/// unstable at 0.9.
const DG_CFL: [f64; 4] = [0.9, 0.8, 0.7, 0.5];

type Outcome = Result<(bool, String), HarnessError>;

fn cfg(scheme: Scheme, order: usize) -> SchemeConfig {
    let c = SchemeConfig::new(scheme, order);
    match scheme {
        Scheme::AderDg => c.with_cfl(DG_CFL[order - 2]),
        _ => c,
    }
}

fn study(case: TestCase, config: SchemeConfig, meshes: &[usize]) -> Result<Vec<ConvergenceRow>, HarnessError> {
    convergence_study(&RunSpec::new(case, config, meshes[0]), meshes)
}

/// L1 order of the finest mesh pair whose fine error is above the round-off floor.
fn finest_order(rows: &[ConvergenceRow]) -> Option<f64> {
    rows.iter()
        .rev()
        .find(|r| r.errors.l1 >= ROUND_OFF_FLOOR && r.l1_order.is_some())
        .and_then(|r| r.l1_order)
}

fn last_order(rows: &[ConvergenceRow]) -> f64 {
    rows.last().and_then(|r| r.l1_order).unwrap_or(f64::NAN)
}

fn within_factor(a: f64, b: f64, factor: f64) -> bool {
    a > 0.0 && b > 0.0 && (a / b).max(b / a) <= factor
}

fn fmt_orders(rows: &[ConvergenceRow]) -> String {
    rows.iter()
        .filter_map(|r| r.l1_order.map(|o| format!("{o:.2}")))
        .collect::<Vec<_>>()
        .join("/")
}

/// Results shared between criteria so that no run is repeated.
#[derive(Default)]
struct Shared {
    quartic_grprec: BTreeMap<usize, Vec<ConvergenceRow>>,
    euler_grprec: BTreeMap<usize, Vec<ConvergenceRow>>,
    euler_weno: BTreeMap<usize, Vec<ConvergenceRow>>,
    euler_dg: BTreeMap<usize, Vec<ConvergenceRow>>,
}

fn quartic_grprec(shared: &mut Shared) -> Outcome {
    let paper_order = [1.99, 3.08, 4.06, 5.21];
    let paper_l1 = [5.46e-4, 1.03e-5, 5.39e-7, 8.60e-9];
    let mut ok = true;
    let mut detail = Vec::new();
    for order in 2..=5 {
        let rows = study(TestCase::QuarticSine, cfg(Scheme::Grprec, order), &[16, 32, 64, 128, 256])?;
        let o = last_order(&rows);
        let e = rows[4].errors.l1;
        let pass = (o - paper_order[order - 2]).abs() <= 0.2 && within_factor(e, paper_l1[order - 2], 3.0);
        ok &= pass;
        detail.push(format!("o{order}: ord {o:.2} L1(256) {e:.3e}"));
        shared.quartic_grprec.insert(order, rows);
    }
    Ok((ok, detail.join("; ")))
}

fn euler_grprec(shared: &mut Shared) -> Outcome {
    let paper_order = [2.00, 3.01, 4.01, 5.49];
    let paper_l1 = [
        [7.19e-2, 1.81e-2, 4.48e-3, 1.11e-3, 2.78e-4],
        [1.74e-3, 1.86e-4, 2.21e-5, 2.73e-6, 3.40e-7],
        [4.93e-4, 2.50e-5, 1.45e-6, 8.88e-8, 5.52e-9],
        [7.96e-6, 1.27e-7, 2.10e-9, 3.89e-11, 8.64e-13],
    ];
    let mut orders_ok = true;
    let mut errors_ok = true;
    let mut detail = Vec::new();
    for order in 2..=5 {
        let rows = study(TestCase::EulerSmooth, cfg(Scheme::Grprec, order), &[40, 80, 160, 320, 640])?;
        let o = last_order(&rows);
        let pass = (o - paper_order[order - 2]).abs() <= 0.2
            || (order == 5 && finest_order(&rows).is_some_and(|p| p >= 4.8));
        orders_ok &= pass;
        let worst = rows
            .iter()
            .zip(paper_l1[order - 2])
            .map(|(r, p)| (r.errors.l1 / p).max(p / r.errors.l1))
            .fold(0.0, f64::max);
        errors_ok &= worst <= 3.0;
        detail.push(format!(
            "o{order}: ord {} (pre-floor {:.2}), worst L1 ratio to table {worst:.1}",
            fmt_orders(&rows),
            finest_order(&rows).unwrap_or(f64::NAN)
        ));
        shared.euler_grprec.insert(order, rows);
    }
    detail.push(format!("orders {}, errors {}", pass_str(orders_ok), pass_str(errors_ok)));
    Ok((orders_ok && errors_ok, detail.join("; ")))
}

fn quartic_grprec_nl() -> Outcome {
    let meshes = [16, 32, 64, 128, 256];
    let o2 = last_order(&study(TestCase::QuarticSine, cfg(Scheme::GrprecNl, 2), &meshes)?);
    let o5 = last_order(&study(TestCase::QuarticSine, cfg(Scheme::GrprecNl, 5), &meshes)?);
    let ok = (1.6..=2.1).contains(&o2) && o5 >= 5.5;
    Ok((ok, format!("order 2: {o2:.2} (want 1.6..2.1), order 5: {o5:.2} (want >= 5.5)")))
}

fn baselines(shared: &mut Shared) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for order in 2..=5 {
        // fifth-order WENO-DK is run at C = 0.7 as in its reference table
        let c = if order == 5 { cfg(Scheme::WenoDk, 5).with_cfl(0.7) } else { cfg(Scheme::WenoDk, order) };
        let rows = study(TestCase::EulerSmooth, c, &[40, 80, 160, 320, 640])?;
        let o = finest_order(&rows).unwrap_or(f64::NAN);
        ok &= (o - order as f64).abs() <= 0.2;
        detail.push(format!("weno o{order} {o:.2}"));
        shared.euler_weno.insert(order, rows);
    }
    for order in 2..=5 {
        let meshes: &[usize] = match order {
            2 | 3 => &[40, 80, 160, 320],
            4 => &[40, 80, 160],
            _ => &[20, 40, 80],
        };
        let rows = study(TestCase::EulerSmooth, cfg(Scheme::AderDg, order), meshes)?;
        let o = finest_order(&rows).unwrap_or(f64::NAN);
        ok &= (o - order as f64).abs() <= 0.2;
        detail.push(format!("dg o{order} {o:.2}"));
        shared.euler_dg.insert(order, rows);
    }
    Ok((ok, detail.join(", ")))
}

fn multiwave() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for order in 2..=5 {
        let out = run(&RunSpec::new(TestCase::Multiwave, cfg(Scheme::Grprec, order), 100))?;
        let d = diagnostics(&out.solution.primary());
        let linf = d.max.abs().max(d.min.abs());
        ok &= linf <= 1.5 && out.solution.time() == 2000.0;
        detail.push(format!("o{order} max|q| {linf:.3}"));
    }
    Ok((ok, detail.join(", ")))
}

fn sod() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for order in 2..=5 {
        let mut l1 = Vec::new();
        for scheme in [Scheme::GrprecNl, Scheme::WenoDk] {
            match riemann_profile(&RunSpec::new(TestCase::Sod, cfg(scheme, order), 100)) {
                Ok(p) => l1.push(Some(p.density_l1)),
                Err(e) => {
                    detail.push(format!("{scheme} o{order} failed: {e}"));
                    l1.push(None);
                }
            }
        }
        match (l1[0], l1[1]) {
            (Some(a), Some(b)) => {
                let pass = a <= 2e-2 && b <= 2e-2 && (a - b).abs() <= 0.3 * a.max(b);
                ok &= pass;
                detail.push(format!("o{order} L1 nl {a:.3e} weno {b:.3e}"));
            }
            (None, Some(b)) => {
                ok = false;
                detail.push(format!("o{order} weno L1 {b:.3e}"));
            }
            _ => ok = false,
        }
    }
    Ok((ok, detail.join("; ")))
}

fn is_inadmissible(e: &HarnessError) -> bool {
    match e {
        HarnessError::Solver(s) => matches!(
            s.root(),
            SolverError::Inadmissible { .. } | SolverError::InadmissibleData(_) | SolverError::Vacuum { .. }
        ),
        _ => false,
    }
}

fn short(e: &HarnessError) -> String {
    let s = e.to_string();
    s.chars().take(90).collect()
}

fn one_two_three() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for scheme in [Scheme::GrprecNl, Scheme::WenoDk] {
        for order in 2..=5 {
            let cfl = if order <= 3 { 0.9 } else { 0.7 };
            match riemann_profile(&RunSpec::new(TestCase::OneTwoThree, cfg(scheme, order).with_cfl(cfl), 100)) {
                Ok(p) if p.min_density() > 0.0 => detail.push(format!("{scheme} o{order} C={cfl} ok")),
                Ok(p) => {
                    ok = false;
                    detail.push(format!("{scheme} o{order} C={cfl} rho_min {:.3e}", p.min_density()));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("{scheme} o{order} C={cfl} failed: {}", short(&e)));
                }
            }
            if order >= 4 {
                match riemann_profile(&RunSpec::new(TestCase::OneTwoThree, cfg(scheme, order), 100)) {
                    Err(e) if is_inadmissible(&e) => detail.push(format!("{scheme} o{order} C=0.9 inadmissible as expected")),
                    Err(e) => {
                        ok = false;
                        detail.push(format!("{scheme} o{order} C=0.9 unexpected error: {}", short(&e)));
                    }
                    Ok(_) => {
                        ok = false;
                        detail.push(format!("{scheme} o{order} C=0.9 completed"));
                    }
                }
            }
        }
    }
    Ok((ok, detail.join("; ")))
}

fn frontier(rows: &[ConvergenceRow]) -> Vec<(f64, f64)> {
    rows.iter().map(|r| (r.cpu, r.errors.l1)).collect()
}

fn efficiency(shared: &Shared) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    let meshes = [32, 64, 128, 256];
    for order in 2..=5 {
        let base = |scheme| RunSpec::new(TestCase::QuarticSine, cfg(scheme, order), 32);
        let fv = efficiency_series(&base(Scheme::Grprec), &meshes, 3)?;
        let dg = efficiency_series(&base(Scheme::AderDg), &meshes, 3)?;
        let dominates = frontier_dominates(
            &fv.iter().map(|p| (p.cpu, p.l1)).collect::<Vec<_>>(),
            &dg.iter().map(|p| (p.cpu, p.l1)).collect::<Vec<_>>(),
        );
        ok &= dominates;
        detail.push(format!("quartic o{order} grprec<dg {}", pass_str(dominates)));
    }
    for order in 2..=5 {
        let (Some(fv), Some(dg)) = (shared.euler_grprec.get(&order), shared.euler_dg.get(&order)) else {
            return Err(HarnessError::Study("missing Euler convergence data".into()));
        };
        let dominates = frontier_dominates(&frontier(fv), &frontier(dg));
        ok &= dominates;
        detail.push(format!("euler o{order} grprec<dg {}", pass_str(dominates)));
    }
    for order in 3..=5 {
        let nl = study(TestCase::EulerSmooth, cfg(Scheme::GrprecNl, order), &[80, 160, 320])?;
        let (Some(fv), Some(weno)) = (shared.euler_grprec.get(&order), shared.euler_weno.get(&order)) else {
            return Err(HarnessError::Study("missing Euler convergence data".into()));
        };
        for n in &nl {
            let cpu = |rows: &[ConvergenceRow]| rows.iter().find(|r| r.mesh == n.mesh).map(|r| r.cpu);
            let (Some(g), Some(w)) = (cpu(fv), cpu(weno)) else { continue };
            let slowest = w > g && w > n.cpu;
            ok &= slowest;
            detail.push(format!(
                "M={} o{order} cpu weno {w:.2} grprec {g:.2} nl {:.2}{}",
                n.mesh,
                n.cpu,
                if slowest { "" } else { " (weno not slowest)" }
            ));
        }
    }
    Ok((ok, detail.join("; ")))
}

fn pass_str(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fourier(c: [f64; 4], x: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, a)| a * (2.0 * PI * (k + 1) as f64 * x + k as f64).sin())
        .sum()
}

fn drift<const N: usize>(a: [f64; N], b: [f64; N]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn conservation_drift<const N: usize, P: PdeModel<N> + Copy, F: Fn(f64) -> [f64; N]>(
    model: P,
    cells: usize,
    ic: F,
) -> Result<f64, SolverError> {
    let grid = Grid::new(0.0, 1.0, cells, Boundary::Periodic)?;
    let mut worst: f64 = 0.0;
    for scheme in Scheme::ALL {
        for order in 2..=5 {
            let mut s = Solver::new(model, grid, cfg(scheme, order), &ic, &[])?;
            let before = s.state().total(grid.dx);
            for _ in 0..1000 {
                s.step(f64::INFINITY)?;
            }
            worst = worst.max(drift(before, s.state().total(grid.dx)));
        }
    }
    Ok(worst)
}

fn sample(p: &LegendrePoly) -> StencilData {
    let mut d = StencilData::default();
    for o in -4..=4isize {
        d.set_average(o, p.mean(o as f64, o as f64 + 1.0));
    }
    for k in Knot::ALL {
        d.set_knot(k, p.eval(k.xi()));
    }
    d
}

const METHODS: [ReconstructionMethod; 4] = [
    ReconstructionMethod::Grprec,
    ReconstructionMethod::GrprecNl,
    ReconstructionMethod::WenoDk,
    ReconstructionMethod::CentralLinear,
];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn verdict(name: &str, r: Result<(), impl std::fmt::Display>, detail: &mut Vec<String>) -> bool {
    match r {
        Ok(()) => {
            detail.push(format!("{name} ok"));
            true
        }
        Err(e) => {
            detail.push(format!("{name} FAILED: {e}"));
            false
        }
    }
}

fn properties() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;

    let r = runner(1).run(&(prop::array::uniform4(-0.5..0.5f64), 0.5..2.0f64), |(c, shift)| {
        let model = Advection::new(1.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let d = conservation_drift(model, 16, |x| [shift + fourier(c, x)]).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(d < 1e-12, "advection drift {d:e}");
        let euler = Euler::new(1.4).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let small = c.map(|v| 0.1 * v);
        let ic = |x: f64| euler.prim_to_cons(&PrimitiveState::new(1.0 + fourier(small, x), 1.0 + fourier(small, x + 0.3), 2.0));
        let d = conservation_drift(euler, 12, ic).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(d < 1e-12, "Euler drift {d:e}");
        Ok(())
    });
    ok &= verdict("conservation", r, &mut detail);

    let data = (prop::array::uniform9(-2.0..2.0f64), prop::array::uniform4(-2.0..2.0f64));
    let r = runner(256).run(&data, |(a, k)| {
        let mut d = StencilData::default();
        for (o, v) in (-4..=4isize).zip(a) {
            d.set_average(o, v);
        }
        for (knot, v) in Knot::ALL.into_iter().zip(k) {
            d.set_knot(knot, v);
        }
        for method in METHODS {
            for m in 1..=4 {
                let p = method.apply(m, &d, 0.05);
                prop_assert!((p.mean(0.0, 1.0) - a[4]).abs() < 1e-12, "{method:?} m = {m}");
            }
        }
        Ok(())
    });
    ok &= verdict("cell means", r, &mut detail);

    let r = runner(256).run(&(1usize..=4, prop::array::uniform5(-1.0..1.0f64)), |(m, c)| {
        let mut coeffs = [0.0; MAX_MODES];
        coeffs[..=m].copy_from_slice(&c[..=m]);
        let target = LegendrePoly::new(m, coeffs);
        let d = sample(&target);
        for method in METHODS {
            let p = method.apply(m, &d, 0.05);
            for k in 0..=m {
                prop_assert!((p.coeffs[k] - target.coeffs[k]).abs() < 1e-10, "{method:?} m = {m}");
            }
        }
        Ok(())
    });
    ok &= verdict("polynomial reproduction", r, &mut detail);

    let prim = (0.05..5.0f64, -3.0..3.0f64, 0.05..5.0f64);
    let r = runner(256).run(&(prim, -5.0..5.0f64, -2.0..2.0f64), |((rho, u, p), q, lambda)| {
        let m = Euler::new(1.4).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let qe = m.prim_to_cons(&PrimitiveState::new(rho, u, p));
        let f = godunov_flux(&m, &qe, &qe).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let exact = m.flux(&qe);
        for k in 0..3 {
            prop_assert!((f[k] - exact[k]).abs() < 1e-12 * exact[k].abs().max(1.0));
        }
        let adv = Advection::new(lambda).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let fa = godunov_flux(&adv, &[q], &[q]).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(fa, adv.flux(&[q]));
        Ok(())
    });
    ok &= verdict("flux consistency", r, &mut detail);

    let side = (0.5..2.0f64, -0.5..0.5f64, 0.5..2.0f64).prop_map(|(r, u, p)| PrimitiveState::new(r, u, p));
    let r = runner(200).run(&(side.clone(), side), |(wl, wr)| {
        let approx = trrs_star(1.4, &wl, &wr).map_err(|e| TestCaseError::fail(e.to_string()))?.p;
        let exact = exact_star(1.4, &wl, &wr).map_err(|e| TestCaseError::fail(e.to_string()))?.p;
        prop_assert!((approx - exact).abs() <= 0.05 * exact, "{approx} vs {exact}");
        Ok(())
    });
    ok &= verdict("TRRS star pressure", r, &mut detail);

    let r = runner(256).run(
        &(1usize..=4, prop::array::uniform5(-1.0..1.0f64), 0.05..1.0f64, prop::sample::select(vec![-1.5f64, 1.0, 2.0])),
        |(m, c, courant, lambda)| {
            let dx = 0.1;
            let dt = courant * dx / lambda.abs();
            let mut coeffs = [0.0; MAX_MODES];
            coeffs[..=m].copy_from_slice(&c[..=m]);
            let poly = LegendrePoly::new(m, coeffs);
            let mut rec = ReconstructionPolynomial::constant(m, 0, dx, [0.0]);
            rec.set_component(0, &poly);
            let model = Advection::new(lambda).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let w = det_predictor(&model, &rec, dt).map_err(|e| TestCaseError::fail(e.to_string()))?;
            for k in 0..=4 {
                for j in 0..=4 {
                    let (xi, tau) = (0.25 * k as f64, 0.25 * j as f64);
                    let exact = poly.eval(xi - lambda * dt / dx * tau);
                    let err = (w.eval(xi, tau)[0] - exact).abs();
                    prop_assert!(err < 1e-12 * exact.abs().max(1.0), "error {err:e} against {exact}");
                }
            }
            Ok(())
        },
    );
    ok &= verdict("predictor shift", r, &mut detail);

    Ok((ok, detail.join(", ")))
}

fn main() -> ExitCode {
    let mut shared = Shared::default();
    let mut failures = 0;
    let mut report = |id: usize, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failures += 1;
        }
        println!("{} criterion {id} ({name}, {secs:.0} s): {detail}", pass_str(pass));
    };

    let t = Instant::now();
    report(1, "quartic-sine GRPrec convergence", t, quartic_grprec(&mut shared));
    let t = Instant::now();
    report(2, "Euler smooth GRPrec convergence", t, euler_grprec(&mut shared));
    let t = Instant::now();
    report(3, "GRPrecNL advection orders", t, quartic_grprec_nl());
    let t = Instant::now();
    report(4, "WENO-DK and DG Euler orders", t, baselines(&mut shared));
    let t = Instant::now();
    report(5, "multiwave stability", t, multiwave());
    let t = Instant::now();
    report(6, "Sod density profiles", t, sod());
    let t = Instant::now();
    report(7, "123 problem", t, one_two_three());
    let t = Instant::now();
    report(8, "efficiency ordering", t, efficiency(&shared));
    let t = Instant::now();
    report(9, "property suites", t, properties());

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}

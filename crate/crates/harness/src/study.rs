//! Convergence and efficiency studies.

use grprec_core::mesh::ErrorNorms;
use grprec_core::Scheme;

use crate::driver::{run, RunSpec};
use crate::error::HarnessError;

/// One mesh of a convergence table. Orders are `None` on the first mesh and
/// whenever an error vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub mesh: usize,
    pub errors: ErrorNorms,
    pub linf_order: Option<f64>,
    pub l1_order: Option<f64>,
    pub l2_order: Option<f64>,
    pub cpu: f64,
}

/// `log(e_coarse / e_fine) / log(M_fine / M_coarse)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, m_coarse: usize, m_fine: usize) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && m_fine != m_coarse {
        Some((e_coarse / e_fine).ln() / (m_fine as f64 / m_coarse as f64).ln())
    } else {
        None
    }
}

fn check_meshes(meshes: &[usize]) -> Result<(), HarnessError> {
    if meshes.len() < 2 {
        return Err(HarnessError::Study(format!(
            "a study needs at least 2 meshes, got {}",
            meshes.len()
        )));
    }
    Ok(())
}

/// Runs `base` on every mesh and tabulates errors and observed orders.
pub fn convergence_study(base: &RunSpec, meshes: &[usize]) -> Result<Vec<ConvergenceRow>, HarnessError> {
    check_meshes(meshes)?;
    if !base.case.reports_errors() {
        return Err(HarnessError::Study(format!(
            "test `{}` has no error norms",
            base.case
        )));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(meshes.len());
    for &mesh in meshes {
        let out = run(&base.with_mesh(mesh))?;
        let errors = out.errors()?;
        let (linf_order, l1_order, l2_order) = match rows.last() {
            Some(prev) => (
                observed_order(prev.errors.linf, errors.linf, prev.mesh, mesh),
                observed_order(prev.errors.l1, errors.l1, prev.mesh, mesh),
                observed_order(prev.errors.l2, errors.l2, prev.mesh, mesh),
            ),
            None => (None, None, None),
        };
        rows.push(ConvergenceRow {
            mesh,
            errors,
            linf_order,
            l1_order,
            l2_order,
            cpu: out.seconds,
        });
    }
    Ok(rows)
}

/// One (scheme, order, mesh) run of an efficiency study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint {
    pub scheme: Scheme,
    pub order: usize,
    pub mesh: usize,
    pub l1: f64,
    /// Median stepping time over the repetitions.
    pub cpu: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Error and median CPU time of `base` on each mesh.
pub fn efficiency_series(
    base: &RunSpec,
    meshes: &[usize],
    repetitions: usize,
) -> Result<Vec<EfficiencyPoint>, HarnessError> {
    check_meshes(meshes)?;
    let repetitions = repetitions.max(1);
    let mut out = Vec::with_capacity(meshes.len());
    for &mesh in meshes {
        let spec = base.with_mesh(mesh);
        let mut times = Vec::with_capacity(repetitions);
        let mut l1 = 0.0;
        for _ in 0..repetitions {
            let r = run(&spec)?;
            l1 = r.errors()?.l1;
            times.push(r.seconds);
        }
        out.push(EfficiencyPoint {
            scheme: base.scheme.scheme,
            order: base.scheme.order,
            mesh,
            l1,
            cpu: median(times),
        });
    }
    Ok(out)
}

/// `err = c * cpu^(-p)`, fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub c: f64,
    pub p: f64,
}

impl PowerFit {
    pub fn fit(points: &[(f64, f64)]) -> Result<Self, HarnessError> {
        let usable: Vec<(f64, f64)> = points
            .iter()
            .filter(|(cpu, err)| *cpu > 0.0 && *err > 0.0)
            .map(|&(cpu, err)| (cpu.ln(), err.ln()))
            .collect();
        if usable.len() < 2 {
            return Err(HarnessError::Study(format!(
                "extrapolation needs at least 2 positive (cpu, error) points, got {}",
                usable.len()
            )));
        }
        let n = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx <= 0.0 {
            return Err(HarnessError::Study("all CPU times are equal".into()));
        }
        let slope = sxy / sxx;
        Ok(PowerFit {
            c: (my - slope * mx).exp(),
            p: -slope,
        })
    }

    /// CPU time at which the fitted error reaches `err`.
    pub fn cpu_for_error(&self, err: f64) -> f64 {
        (self.c / err).powf(1.0 / self.p)
    }
}

/// Whether frontier `a` lies at or below frontier `b` wherever their CPU
/// ranges overlap. Each frontier is a list of `(cpu, error)` pairs; `a` is
/// interpolated linearly in log-log space at the CPU times of `b`. Points of
/// `b` cheaper than every point of `a` are compared against `a`'s cheapest
/// point, which is conservative since errors decrease with CPU.
pub fn frontier_dominates(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    let mut a: Vec<(f64, f64)> = a
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|&(c, e)| (c.ln(), e.ln()))
        .collect();
    a.sort_by(|x, y| x.0.total_cmp(&y.0));
    if a.is_empty() {
        return false;
    }
    for &(cpu, err) in b.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0) {
        let x = cpu.ln();
        let y = err.ln();
        let (first, last) = (a[0], a[a.len() - 1]);
        let ya = if x <= first.0 {
            first.1
        } else if x >= last.0 {
            // beyond a's most expensive run: extrapolate along its last segment
            if a.len() >= 2 {
                let (p, q) = (a[a.len() - 2], last);
                q.1 + (q.1 - p.1) / (q.0 - p.0) * (x - q.0)
            } else {
                last.1
            }
        } else {
            let k = a.iter().position(|p| p.0 >= x).unwrap_or(a.len() - 1).max(1);
            let (p, q) = (a[k - 1], a[k]);
            p.1 + (q.1 - p.1) / (q.0 - p.0) * (x - p.0)
        };
        if ya > y {
            return false;
        }
    }
    true
}

//! CSV emission. All floats are written in scientific notation with six
//! significant digits; undefined entries (orders on the first mesh) are empty.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use grprec_core::mesh::ErrorNorms;
use grprec_core::riemann::PrimitiveState;

use crate::error::HarnessError;
use crate::study::{ConvergenceRow, EfficiencyPoint};

/// Version of the column layouts below; bump on any change.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CONVERGENCE_HEADER: [&str; 8] = [
    "mesh", "linf_err", "linf_ord", "l1_err", "l1_ord", "l2_err", "l2_ord", "cpu",
];
pub const EFFICIENCY_HEADER: [&str; 5] = ["scheme", "order", "mesh", "l1_err", "cpu"];
pub const FIT_HEADER: [&str; 5] = ["scheme", "order", "slope", "cpu_at_target", "relative_cpu"];
pub const SCALAR_PROFILE_HEADER: [&str; 3] = ["x", "q", "q_exact"];
pub const EULER_PROFILE_HEADER: [&str; 7] = ["x", "rho", "u", "p", "rho_exact", "u_exact", "p_exact"];

pub fn fmt_float(x: f64) -> String {
    format!("{x:.5e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn parse_float(s: &str) -> Result<f64, HarnessError> {
    s.trim()
        .parse()
        .map_err(|_| HarnessError::Study(format!("not a number: `{s}`")))
}

fn parse_opt(s: &str) -> Result<Option<f64>, HarnessError> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_float(s).map(Some)
    }
}

pub fn write_convergence<W: Write>(w: W, rows: &[ConvergenceRow]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CONVERGENCE_HEADER)?;
    for r in rows {
        wr.write_record([
            r.mesh.to_string(),
            fmt_float(r.errors.linf),
            fmt_opt(r.linf_order),
            fmt_float(r.errors.l1),
            fmt_opt(r.l1_order),
            fmt_float(r.errors.l2),
            fmt_opt(r.l2_order),
            fmt_float(r.cpu),
        ])?;
    }
    wr.flush().map_err(|e| HarnessError::io("<csv writer>", e))?;
    Ok(())
}

pub fn read_convergence<R: Read>(r: R) -> Result<Vec<ConvergenceRow>, HarnessError> {
    let mut rd = csv::Reader::from_reader(r);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != CONVERGENCE_HEADER {
        return Err(HarnessError::Study(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let mesh = rec[0]
            .trim()
            .parse()
            .map_err(|_| HarnessError::Study(format!("bad mesh `{}`", &rec[0])))?;
        out.push(ConvergenceRow {
            mesh,
            errors: ErrorNorms {
                linf: parse_float(&rec[1])?,
                l1: parse_float(&rec[3])?,
                l2: parse_float(&rec[5])?,
            },
            linf_order: parse_opt(&rec[2])?,
            l1_order: parse_opt(&rec[4])?,
            l2_order: parse_opt(&rec[6])?,
            cpu: parse_float(&rec[7])?,
        });
    }
    Ok(out)
}

pub fn write_efficiency<W: Write>(w: W, points: &[EfficiencyPoint]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(EFFICIENCY_HEADER)?;
    for p in points {
        wr.write_record([
            p.scheme.name().to_string(),
            p.order.to_string(),
            p.mesh.to_string(),
            fmt_float(p.l1),
            fmt_float(p.cpu),
        ])?;
    }
    wr.flush().map_err(|e| HarnessError::io("<csv writer>", e))?;
    Ok(())
}

/// Extrapolated cost of one (scheme, order) series.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub scheme: String,
    pub order: usize,
    pub slope: f64,
    pub cpu_at_target: f64,
    pub relative_cpu: f64,
}

pub fn write_fits<W: Write>(w: W, rows: &[FitRow]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(FIT_HEADER)?;
    for r in rows {
        wr.write_record([
            r.scheme.clone(),
            r.order.to_string(),
            fmt_float(r.slope),
            fmt_float(r.cpu_at_target),
            fmt_float(r.relative_cpu),
        ])?;
    }
    wr.flush().map_err(|e| HarnessError::io("<csv writer>", e))?;
    Ok(())
}

pub fn write_scalar_profile<W: Write>(w: W, x: &[f64], q: &[f64], exact: &[f64]) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SCALAR_PROFILE_HEADER)?;
    for ((x, q), e) in x.iter().zip(q).zip(exact) {
        wr.write_record([fmt_float(*x), fmt_float(*q), fmt_float(*e)])?;
    }
    wr.flush().map_err(|e| HarnessError::io("<csv writer>", e))?;
    Ok(())
}

pub fn write_euler_profile<W: Write>(
    w: W,
    x: &[f64],
    numerical: &[PrimitiveState],
    exact: &[PrimitiveState],
) -> Result<(), HarnessError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(EULER_PROFILE_HEADER)?;
    for ((x, n), e) in x.iter().zip(numerical).zip(exact) {
        wr.write_record([x, &n.rho, &n.u, &n.p, &e.rho, &e.u, &e.p].map(|v| fmt_float(*v)))?;
    }
    wr.flush().map_err(|e| HarnessError::io("<csv writer>", e))?;
    Ok(())
}

/// Creates `path` (and its parent directory) for writing.
pub fn create(path: &Path) -> Result<File, HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    File::create(path).map_err(|e| HarnessError::io(path, e))
}

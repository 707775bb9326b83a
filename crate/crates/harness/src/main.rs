use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grprec_core::ader::{Scheme, SchemeConfig};
use grprec_harness::cases::TestCase;
use grprec_harness::config::Experiment;
use grprec_harness::driver::{diagnostics, run, RunSpec, DEFAULT_GAMMA};
use grprec_harness::error::HarnessError;
use grprec_harness::output::{self, FitRow};
use grprec_harness::profiles::{riemann_profile, write_profile};
use grprec_harness::study::{convergence_study, efficiency_series, PowerFit};

#[derive(Parser)]
#[command(name = "grprec", version, about = "ADER finite-volume and DG experiments in one space dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its final profile.
    Solve(ConfigArg),
    /// Tabulate errors and observed orders over a list of meshes.
    Convergence(ConfigArg),
    /// Error against CPU time for several schemes and orders.
    Efficiency(ConfigArg),
    /// Shock-tube profiles against the exact Riemann solution.
    Riemann(RiemannArgs),
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RiemannArgs {
    /// `sod` or `123`
    #[arg(long)]
    test: String,
    #[arg(long, default_value = "grprec-nl")]
    scheme: String,
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 100)]
    mesh: usize,
    #[arg(long, default_value_t = 0.9)]
    cfl: f64,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    /// Profile CSV; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn with_output<F>(path: Option<&Path>, f: F) -> Result<(), HarnessError>
where
    F: FnOnce(&mut dyn io::Write) -> Result<(), HarnessError>,
{
    match path {
        Some(p) => {
            let mut file = output::create(p)?;
            f(&mut file)
        }
        None => f(&mut io::stdout().lock()),
    }
}

fn describe(spec: &RunSpec) -> String {
    format!(
        "{} {} order {} cfl {}",
        spec.case, spec.scheme.scheme, spec.scheme.order, spec.scheme.cfl
    )
}

fn solve(exp: &Experiment) -> Result<(), HarnessError> {
    let out = run(&exp.spec)?;
    eprintln!(
        "{}, M = {}: {} steps, {:.3} s",
        describe(&exp.spec),
        exp.spec.mesh,
        out.steps,
        out.seconds
    );
    if exp.spec.case.reports_errors() {
        let e = out.errors()?;
        eprintln!("errors: Linf {:.5e}  L1 {:.5e}  L2 {:.5e}", e.linf, e.l1, e.l2);
    } else {
        let d = diagnostics(&out.solution.primary());
        eprintln!(
            "total variation {:.5e}, min {:.5e}, max {:.5e}",
            d.total_variation, d.min, d.max
        );
    }
    with_output(exp.output.as_deref(), |w| write_profile(&out, w))
}

fn convergence(exp: &Experiment) -> Result<(), HarnessError> {
    let rows = convergence_study(&exp.spec, &exp.meshes)?;
    eprintln!("{}", describe(&exp.spec));
    with_output(exp.output.as_deref(), |w| output::write_convergence(w, &rows))
}

fn efficiency(exp: &Experiment) -> Result<(), HarnessError> {
    let eff = exp
        .efficiency
        .as_ref()
        .ok_or_else(|| HarnessError::Config("missing [efficiency] table".into()))?;
    let mut points = Vec::new();
    let mut fits = Vec::new();
    for &scheme in &eff.schemes {
        for &order in &eff.orders {
            let spec = eff.spec_for(&exp.spec, scheme, order);
            let series = efficiency_series(&spec, &exp.meshes, eff.repetitions)?;
            let fit = PowerFit::fit(&series.iter().map(|p| (p.cpu, p.l1)).collect::<Vec<_>>())?;
            eprintln!(
                "{}: slope {:.3}, extrapolated CPU at {:.0e}: {:.3e} s",
                describe(&spec),
                fit.p,
                eff.target_error,
                fit.cpu_for_error(eff.target_error)
            );
            fits.push((scheme, order, fit));
            points.extend(series);
        }
    }
    let reference = fits
        .iter()
        .find(|(s, o, _)| *s == Scheme::Grprec && *o == 5)
        .or(fits.first())
        .map(|(_, _, f)| f.cpu_for_error(eff.target_error))
        .unwrap_or(1.0);
    let rows: Vec<FitRow> = fits
        .iter()
        .map(|(s, o, f)| {
            let cpu = f.cpu_for_error(eff.target_error);
            FitRow {
                scheme: s.name().to_string(),
                order: *o,
                slope: f.p,
                cpu_at_target: cpu,
                relative_cpu: cpu / reference,
            }
        })
        .collect();
    with_output(exp.output.as_deref(), |w| output::write_efficiency(w, &points))?;
    let fit_path = exp.output.as_ref().map(|p| {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        p.with_file_name(format!("{stem}_fit.csv"))
    });
    with_output(fit_path.as_deref(), |w| output::write_fits(w, &rows))
}

fn riemann(args: &RiemannArgs) -> Result<(), HarnessError> {
    let case: TestCase = args.test.parse()?;
    let scheme: Scheme = args.scheme.parse()?;
    let config = SchemeConfig::new(scheme, args.order).with_cfl(args.cfl);
    let mut spec = RunSpec::new(case, config, args.mesh);
    spec.gamma = args.gamma;
    if let Some(t) = args.t_end {
        spec.t_end = t;
    }
    let profile = riemann_profile(&spec)?;
    eprintln!(
        "{}, M = {}: density L1 {:.5e}, min density {:.5e}, {} steps",
        describe(&spec),
        args.mesh,
        profile.density_l1,
        profile.min_density(),
        profile.outcome.steps
    );
    with_output(args.output.as_deref(), |w| profile.write_csv(w))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(c) => Experiment::load(&c.config).and_then(|e| solve(&e)),
        Command::Convergence(c) => Experiment::load(&c.config).and_then(|e| convergence(&e)),
        Command::Efficiency(c) => Experiment::load(&c.config).and_then(|e| efficiency(&e)),
        Command::Riemann(a) => riemann(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

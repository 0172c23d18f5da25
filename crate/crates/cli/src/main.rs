use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdist_core::distances::{self, DistanceReport};
use qdist_core::purification::{dn_via_purification, Objective};
use qdist_core::sweep::{format_sig, run_sweep, to_csv, SweepConfig, SweepMethod};
use qdist_core::verify::{run_verify, VerifyConfig};
use qdist_core::{parse_state, DensityMatrix, Error, PureState};

#[derive(Parser)]
#[command(name = "qdist", version, about = "Entropy-and-purification distance between quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two states read from files.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        /// Only used by `--metric dn`.
        #[arg(long, value_enum, default_value_t = DnMethod::Closed)]
        method: DnMethod,
    },
    /// D_N(ρ, E_p(ρ)) over a grid of Bloch norms and depolarizing strengths, as CSV.
    Figure1 {
        #[arg(long = "r", value_delimiter = ',', default_values_t = SweepConfig::default().r_values)]
        r_values: Vec<f64>,
        #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
        p_steps: u64,
        #[arg(long, value_delimiter = ',', default_value = "closed,procrustes_hs,procrustes_exact")]
        methods: Vec<SweepMethod>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Randomized property suites.
    Verify {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Inclusive dimension range, `lo..hi`.
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Dn,
    Qjsd,
    Bures,
    Wootters,
    Relent,
    Fidelity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DnMethod {
    Closed,
    PurifyHs,
    PurifyExact,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("invalid lower bound `{lo}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("invalid upper bound `{hi}`"))?;
    if lo < 2 || hi < lo {
        return Err(format!("need 2 <= lo <= hi, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SupportViolation { .. } => 3,
            Error::Parse { .. }
            | Error::NotHermitian { .. }
            | Error::NotPsd { .. }
            | Error::InvalidTrace { .. }
            | Error::NotSquare { .. }
            | Error::BlochNormExceeded { .. }
            | Error::NotNormalized { .. }
            | Error::DimensionMismatch { .. }
            | Error::Domain(_) => 2,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    })
}

/// State vector of a pure density matrix.
fn as_pure(rho: &DensityMatrix, path: &Path) -> Result<PureState, Failure> {
    if !rho.is_pure() {
        return Err(Failure::new(
            2,
            format!("{}: pure-state invariant violated: purity = {}", path.display(), format_sig(rho.purity())),
        ));
    }
    let spec = rho.spectrum()?;
    Ok(PureState::normalized(spec.eigenvector(0))?)
}

fn print_report(metric: &str, report: &DistanceReport) {
    println!("metric {metric}");
    println!("value {}", format_sig(report.value));
    println!("method {}", report.method);
    let m = &report.metadata;
    if let Some(f) = m.fidelity {
        println!("fidelity {}", format_sig(f));
    }
    if let Some(o) = m.overlap {
        println!("overlap {}", format_sig(o));
    }
    if let Some(obj) = m.objective {
        println!("objective {obj}");
    }
    if let Some(s) = m.rotation {
        let rows: Vec<String> = s.matrix().0.iter().flatten().map(|x| format_sig(*x)).collect();
        println!("rotation {}", rows.join(" "));
        println!("degenerate {}", m.degenerate);
    }
    if let Some(form) = m.system_form {
        println!("system_form {form}");
    }
}

fn print_value(metric: &str, value: f64) {
    println!("metric {metric}");
    println!("value {}", format_sig(value));
}

fn cmd_distance(a: &Path, b: &Path, metric: Metric, method: DnMethod) -> Result<(), Failure> {
    let rho = read_state(a)?;
    let sigma = read_state(b)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() }.into());
    }
    match metric {
        Metric::Dn => {
            let report = match method {
                DnMethod::Closed => distances::dn_mixed_closed(&rho, &sigma)?,
                DnMethod::PurifyHs => dn_via_purification(&rho, &sigma, Objective::HsNorm)?,
                DnMethod::PurifyExact => dn_via_purification(&rho, &sigma, Objective::ExactOverlap)?,
            };
            print_report("dn", &report);
        }
        Metric::Qjsd => print_value("qjsd", distances::qjsd(&rho, &sigma)?),
        Metric::Bures => print_value("bures", distances::bures(&rho, &sigma)?),
        Metric::Fidelity => print_value("fidelity", distances::fidelity(&rho, &sigma)?),
        Metric::Relent => print_value("relent", distances::relative_entropy(&rho, &sigma)?),
        Metric::Wootters => {
            let (psi, phi) = (as_pure(&rho, a)?, as_pure(&sigma, b)?);
            print_value("wootters", distances::wootters(&psi, &phi)?);
        }
    }
    Ok(())
}

fn cmd_figure1(cfg: SweepConfig, out: Option<&Path>) -> Result<(), Failure> {
    let csv = to_csv(&run_sweep(&cfg)?);
    match out {
        Some(path) => fs::write(path, csv).map_err(|e| Failure::new(1, format!("{}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_verify(cfg: VerifyConfig) -> Result<(), Failure> {
    let report = run_verify(&cfg)?;
    println!("{report}");
    match report.first_failing() {
        None => Ok(()),
        Some(s) => Err(Failure::new(
            1,
            format!("property `{}` failed: {}", s.name, s.first_failure.as_deref().unwrap_or("see report")),
        )),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Distance { a, b, metric, method } => cmd_distance(&a, &b, metric, method),
        Command::Figure1 { r_values, p_steps, methods, out, seed } => {
            let cfg = SweepConfig { r_values, p_steps: p_steps as usize, methods, seed };
            cmd_figure1(cfg, out.as_deref())
        }
        Command::Verify { trials, dims, seed } => {
            cmd_verify(VerifyConfig { trials: trials as usize, dims: dims.0..=dims.1, seed })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

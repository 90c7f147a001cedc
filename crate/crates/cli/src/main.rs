use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

/// Certifies preparation contextuality from prepare-and-measure statistics,
/// tolerating a declared number of unknown measurements.
#[derive(Parser)]
#[command(name = "ctxcert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact disjoint-subset scan over assignment polytopes.
    /// Exit 0 = CONTEXTUAL, 1 = INCONCLUSIVE, 2 = error.
    CertifyAlgorithm {
        scenario: PathBuf,
        /// Guard on the number of known measurements (ontic space is 2^m).
        #[arg(long, default_value_t = 20)]
        max_m: usize,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the statistics vectors as CSV plot data.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Five-case pentagon determinant certification (float pipeline).
    /// Exit 0 = CONTEXTUAL, 1 = INCONCLUSIVE, 2 = error.
    CertifyPentagon {
        scenario: PathBuf,
        /// Tolerance for the clockwise-quadrilateral orientation tests.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        /// Write per-case (x, y) coordinates as CSV plot data.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate qubit statistics: 2^k equally spaced states (or the pentagon
    /// configuration), optional depolarizing noise, optional rationalization.
    GenQubit {
        /// 2^k preparations at angles i·π/(2^k+1) with their projections.
        #[arg(long, conflicts_with = "pentagon")]
        k: Option<u32>,
        /// Emit the 5-preparation pentagon scenario (columns X, Z, W).
        #[arg(long)]
        pentagon: bool,
        /// Depolarizing noise level in [0, 1].
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Rationalize probabilities to this denominator bound ("p/q" output).
        #[arg(long)]
        denominator_bound: Option<u64>,
        /// Declared number of unknown measurements for the scenario.
        #[arg(long)]
        unknown_count: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Audit a candidate ontological model against square statistics.
    /// Exit 0 = audit passed, 1 = bound inapplicable, 2 = error.
    AuditModel {
        scenario: PathBuf,
        model: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Split a point set into two disjoint sub-hulls sharing a point.
    Decompose {
        points: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List every operational equivalence between disjoint preparation
    /// mixtures.
    Equivalences {
        scenario: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::CertifyAlgorithm {
            scenario,
            max_m,
            report,
            plot,
        } => commands::certify_algorithm(&scenario, max_m, report.as_deref(), plot.as_deref()),
        Command::CertifyPentagon {
            scenario,
            tolerance,
            plot,
            report,
        } => commands::certify_pentagon(&scenario, tolerance, report.as_deref(), plot.as_deref()),
        Command::GenQubit {
            k,
            pentagon,
            noise,
            denominator_bound,
            unknown_count,
            output,
        } => commands::gen_qubit(
            k,
            pentagon,
            noise,
            denominator_bound,
            unknown_count,
            output.as_deref(),
        ),
        Command::AuditModel {
            scenario,
            model,
            report,
        } => commands::audit_model(&scenario, &model, report.as_deref()),
        Command::Decompose { points, report } => commands::decompose(&points, report.as_deref()),
        Command::Equivalences {
            scenario,
            report,
            plot,
        } => commands::equivalences(&scenario, report.as_deref(), plot.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

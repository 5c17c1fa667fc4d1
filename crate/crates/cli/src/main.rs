//! `qbrach` — construct time-optimal Hamiltonians for pure-state transfer,
//! evolve them, and audit their optimality against random competitors.

mod io;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qbrach_core::audit::{run_audit, Verdict};
use qbrach_core::brachistochrone::{optimal_hamiltonian_with_hbar, SpreadConvention};
use qbrach_core::evolution::sample_trajectory;
use qbrach_core::geometry::{decompose_plane, fs_distance};
use qbrach_core::{AuditConfig64, StateVector64};

use io::{read_state, to_json_document, write_output};
use records::{AuditRecord, DistanceRecord, MatrixRecord, SolveRecord, StateRecord};

/// A command failure carrying the process exit code.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: String) -> Self {
        Failure { code: 2, message }
    }

    fn dimensions(message: String) -> Self {
        Failure { code: 3, message }
    }

    fn internal(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<qbrach_core::Error> for Failure {
    fn from(e: qbrach_core::Error) -> Self {
        match e {
            qbrach_core::Error::DegeneratePair { .. } => Failure {
                code: 4,
                message: "states coincide; tau = 0; H = 0".into(),
            },
            qbrach_core::Error::DimensionMismatch { .. } => Failure::dimensions(e.to_string()),
            other => Failure::internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    /// The energy budget is the coupling coefficient; eigenvalues ±ω·sin(θ/2).
    Eq8,
    /// The energy budget saturates the eigenvalue spread; eigenvalues ±ω.
    Saturating,
}

impl ConventionArg {
    fn convention(self) -> SpreadConvention {
        match self {
            ConventionArg::Eq8 => SpreadConvention::Coupling,
            ConventionArg::Saturating => SpreadConvention::Saturating,
        }
    }

    fn token(self) -> &'static str {
        match self {
            ConventionArg::Eq8 => "eq8",
            ConventionArg::Saturating => "saturating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchrodingerSign {
    /// Evolution e^{+iHt/ħ}; the construction is stated in this convention.
    Plus,
    /// Negate the reported Hamiltonian for use with e^{−iHt/ħ}.
    Minus,
}

#[derive(Parser)]
#[command(
    name = "qbrach",
    version,
    about = "Time-optimal Hamiltonians for pure-state transfer under a bounded energy spread"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Separation angle between two states, in radians and degrees.
    Distance {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Reject state files whose norm is off by more than 1e-6.
        #[arg(long)]
        strict: bool,
    },
    /// Construct the optimal Hamiltonian and write the full report.
    Solve {
        file_i: PathBuf,
        file_f: PathBuf,
        /// Energy budget.
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// How ω parameterizes the Hamiltonian.
        #[arg(long, value_enum, default_value_t = ConventionArg::Eq8)]
        convention: ConventionArg,
        /// Sign convention of the time-evolution exponential.
        #[arg(long, value_enum, default_value_t = SchrodingerSign::Plus)]
        schrodinger_sign: SchrodingerSign,
        /// Output file; `-` writes to standard output.
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long)]
        strict: bool,
    },
    /// Sample the optimal trajectory as CSV rows over [0, τ].
    Evolve {
        file_i: PathBuf,
        file_f: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Eq8)]
        convention: ConventionArg,
        /// Number of uniformly spaced samples (at least 2).
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long)]
        strict: bool,
    },
    /// Pit the constructed Hamiltonian against random equal-spread competitors.
    Audit {
        file_i: PathBuf,
        file_f: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Eq8)]
        convention: ConventionArg,
        /// Number of independent random competitors.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Number of greedy refinement steps after the random phase.
        #[arg(long, default_value_t = 200)]
        local_steps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Search horizon as a multiple of the analytic transit time.
        #[arg(long, default_value_t = 4.0)]
        tmax_factor: f64,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long)]
        strict: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Distance {
            file_a,
            file_b,
            strict,
        } => {
            let (a, b) = read_pair(&file_a, &file_b, strict)?;
            let theta = fs_distance(&a, &b)?;
            let record = DistanceRecord {
                theta_rad: theta,
                theta_deg: theta.to_degrees(),
            };
            print!("{}", to_json_document(&record)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            file_i,
            file_f,
            omega,
            hbar,
            convention,
            schrodinger_sign,
            out,
            strict,
        } => {
            let (psi_i, psi_f) = read_pair(&file_i, &file_f, strict)?;
            let d = decompose_plane(&psi_i, &psi_f)?;
            let sol = optimal_hamiltonian_with_hbar(&d, omega, hbar, convention.convention())?;

            // Under the opposite evolution convention the same transfer is
            // generated by −H, whose eigenstate for the upper eigenvalue is
            // the other axis state.
            let (hamiltonian, e_plus, e_minus) = match schrodinger_sign {
                SchrodingerSign::Plus => (sol.hamiltonian.clone(), &sol.e_plus, &sol.e_minus),
                SchrodingerSign::Minus => (sol.hamiltonian.negated(), &sol.e_minus, &sol.e_plus),
            };

            let record = SolveRecord {
                theta: d.theta(),
                omega,
                hbar,
                convention: convention.token().to_string(),
                hamiltonian: MatrixRecord::from_matrix(hamiltonian.matrix()),
                e_plus: StateRecord::from_state(e_plus),
                e_minus: StateRecord::from_state(e_minus),
                lambda_plus: sol.lambda_plus,
                lambda_minus: sol.lambda_minus,
                delta_h: sol.delta_h,
                tau: sol.tau,
            };
            write_output(&out, &to_json_document(&record)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve {
            file_i,
            file_f,
            omega,
            hbar,
            convention,
            samples,
            out,
            strict,
        } => {
            let (psi_i, psi_f) = read_pair(&file_i, &file_f, strict)?;
            let d = decompose_plane(&psi_i, &psi_f)?;
            let sol = optimal_hamiltonian_with_hbar(&d, omega, hbar, convention.convention())?;
            let rows = sample_trajectory(&sol.hamiltonian, &psi_i, &psi_f, sol.tau, samples, hbar)?;
            write_output(&out, &trajectory_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit {
            file_i,
            file_f,
            omega,
            convention,
            trials,
            local_steps,
            seed,
            tmax_factor,
            out,
            strict,
        } => {
            let (psi_i, psi_f) = read_pair(&file_i, &file_f, strict)?;
            let cfg = AuditConfig64 {
                n_random: trials,
                n_local_steps: local_steps,
                seed,
                t_max_factor: tmax_factor,
                ..AuditConfig64::default()
            };
            let report = run_audit(&psi_i, &psi_f, omega, 1.0, convention.convention(), &cfg)?;
            let record = AuditRecord {
                tau_star: report.tau_star,
                spread: report.spread,
                threshold: report.threshold,
                trials: report.trials,
                n_arrivals: report.n_arrivals,
                n_beaten: report.n_beaten,
                best_competitor_time: report.best_competitor_time,
                best_gap_relative: report.best_gap_relative,
                hill_history: report.hill_history.clone(),
                verdict: report.verdict.to_string(),
            };
            write_output(&out, &to_json_document(&record)?)?;
            Ok(match report.verdict {
                Verdict::OptimalConfirmed => ExitCode::SUCCESS,
                Verdict::ViolationFound => ExitCode::from(5),
            })
        }
    }
}

fn read_pair(
    file_a: &std::path::Path,
    file_b: &std::path::Path,
    strict: bool,
) -> Result<(StateVector64, StateVector64), Failure> {
    let a = read_state(file_a, strict)?;
    let b = read_state(file_b, strict)?;
    if a.dim() != b.dim() {
        return Err(Failure::dimensions(format!(
            "dimension mismatch: {} is {}-dimensional, {} is {}-dimensional",
            file_a.display(),
            a.dim(),
            file_b.display(),
            b.dim()
        )));
    }
    Ok((a, b))
}

/// CSV with '.' decimals, LF line endings, and 17 significant digits, so
/// output diffs are exact across platforms.
fn trajectory_csv(rows: &[qbrach_core::TrajectorySample64]) -> String {
    let dim = rows.first().map_or(0, |r| r.state.dim());
    let mut csv = String::from("t,fidelity_to_target,delta_h,fs_speed");
    for k in 0..dim {
        csv.push_str(&format!(",re_{k},im_{k}"));
    }
    csv.push('\n');
    for row in rows {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            row.t, row.fidelity, row.delta_h, row.fs_speed
        ));
        for z in row.state.amplitudes() {
            csv.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
        }
        csv.push('\n');
    }
    csv
}

//! The `dol` command line: spectrum tables, figure data, admissible
//! parameter range, constraint diagnostics and the verification report.

pub mod config;
pub mod svg;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dol_core::spectrum::DEFAULT_ROOT_TOL;
use dol_core::{
    admissible_interval, branch_range, constraint_residuals, run_verification, spectrum_table_with,
    valid_branches, Error, GnbtSpec, SpectrumBranch, StructureFunction, TermFilter, VerifyConfig,
};

use config::Config;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const VERIFY_FAILED: i32 = 3;
    pub const BRACKET: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "dol", version, about = "Deformed oscillator laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Terms {
    Full,
    E1,
    E2,
}

impl From<Terms> for TermFilter {
    fn from(t: Terms) -> Self {
        match t {
            Terms::Full => TermFilter::Full,
            Terms::E1 => TermFilter::E1Only,
            Terms::E2 => TermFilter::E2Only,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table E(n) for one mixing-parameter branch.
    Spectrum {
        #[arg(long)]
        q: f64,
        #[arg(long, value_parser = parse_branch)]
        branch: SpectrumBranch,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, value_enum, default_value_t = Terms::Full)]
        terms: Terms,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run every residual suite and write the verification report.
    Verify {
        #[arg(long, default_value_t = 1.1)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..))]
        dim: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Boundaries of the admissible interval of q.
    #[command(name = "admissible-q")]
    AdmissibleQ {
        #[arg(long, value_parser = parse_branch)]
        branch: Option<SpectrumBranch>,
        #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// CSV and SVG data for the q = 1.1 (1) or q = 0.59 (2) figure.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Constraint-combination table of the canonical transformation.
    Constraints {
        #[arg(long)]
        q: f64,
        #[arg(long, value_parser = parse_branch)]
        branch: SpectrumBranch,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_branch(s: &str) -> Result<SpectrumBranch, String> {
    s.parse()
}

/// q of the two figures.
pub fn figure_q(which: u8) -> f64 {
    if which == 1 {
        1.1
    } else {
        0.59
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BracketFailure { .. } => exit::BRACKET,
            Error::DimensionTooSmall(_) => exit::USAGE,
            _ => exit::DOMAIN,
        };
        let mut message = e.to_string();
        if matches!(e, Error::OutsideAdmissibleRegion { .. }) {
            if let Ok((lo, hi)) = admissible_interval(DEFAULT_ROOT_TOL) {
                message.push_str(&format!(
                    "; the admissible interval is approximately ({lo:.4}, {hi:.4})"
                ));
            }
        }
        Self { code, message }
    }
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        Self::usage(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, contents),
        None => out
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            let _ = if code == exit::OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = Config::from_env()?;
    match command {
        Command::Spectrum {
            q,
            branch,
            nmax,
            terms,
            out: path,
            format,
        } => {
            let table = spectrum_table_with(q, branch, terms.into(), nmax.unwrap_or(cfg.nmax))?;
            let text = match format {
                Format::Csv => table::spectrum_csv(&table),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&table).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            emit(out, path.as_deref(), &text)?;
            Ok(exit::OK)
        }
        Command::Verify {
            q,
            p,
            dim,
            tol,
            kappa,
            horizon,
            report: path,
        } => {
            let vc = VerifyConfig {
                q,
                p,
                dim: dim.map_or(cfg.dim, |d| d as usize),
                tol: tol.unwrap_or(cfg.tol),
                kappa: kappa.unwrap_or(cfg.kappa),
                horizon,
            };
            let report = run_verification(&vc)?;
            let mut text = report.to_json();
            text.push('\n');
            emit(out, path.as_deref(), &text)?;
            let gated = report
                .entries
                .iter()
                .filter(|e| e.status != dol_core::CheckStatus::Diagnostic)
                .count();
            let failed = report.failures().count();
            let _ = writeln!(
                err,
                "verify: {} gated checks, {} failed, {} diagnostics",
                gated,
                failed,
                report.entries.len() - gated
            );
            for f in report.failures() {
                let _ = writeln!(err, "  FAIL {} residual {:e}", f.check_id, f.residual);
            }
            Ok(if report.passed() {
                exit::OK
            } else {
                exit::VERIFY_FAILED
            })
        }
        Command::AdmissibleQ { branch, tol } => {
            let (lo, hi) = match branch {
                Some(b) => branch_range(b, tol)?,
                None => admissible_interval(tol)?,
            };
            let _ = writeln!(out, "q_low  = {lo:.9}");
            let _ = writeln!(out, "q_high = {hi:.9}");
            Ok(exit::OK)
        }
        Command::Figure {
            which,
            out_dir,
            nmax,
        } => {
            let q = figure_q(which);
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| Failure::usage(format!("cannot create {}: {e}", out_dir.display())))?;
            let mut all_monotonic = true;
            for branch in valid_branches(q) {
                let t = spectrum_table_with(q, branch, TermFilter::Full, nmax.unwrap_or(cfg.nmax))?;
                let stem = format!("fig{which}_{branch}");
                write_file(
                    &out_dir.join(format!("{stem}.csv")),
                    &table::spectrum_csv(&t),
                )?;
                let title = format!("q = {q}, {branch}, epsilon = {:.6}", t.epsilon);
                write_file(
                    &out_dir.join(format!("{stem}.svg")),
                    &svg::spectrum_svg(&t, &title),
                )?;
                let m = &t.monotonicity;
                all_monotonic &= m.monotonic;
                let _ = writeln!(
                    out,
                    "{stem}: epsilon = {:.12e}, monotonic = {}, sign changes at n = {:?}",
                    t.epsilon, m.monotonic, m.sign_changes
                );
                if let Some((i, j, gap)) = m.closest_pair {
                    let _ = writeln!(out, "{stem}: closest levels n = {i}, {j} (gap {gap:.3e})");
                }
            }
            if all_monotonic {
                let _ = writeln!(
                    out,
                    "note: every branch is monotonic at q = {q}, which contradicts the non-monotonic behaviour described for this figure"
                );
            }
            Ok(exit::OK)
        }
        Command::Constraints {
            q,
            branch,
            kappa,
            horizon,
            out: path,
        } => {
            let eps = dol_core::epsilon_for(q, branch)?;
            let spec = GnbtSpec::canonical(
                StructureFunction::nonstandard_q(q)?,
                eps,
                kappa.unwrap_or(cfg.kappa),
            )?;
            let t = constraint_residuals(q, &spec, horizon)?;
            emit(out, path.as_deref(), &table::constraint_csv(&t))?;
            let _ = writeln!(
                err,
                "constraints: epsilon = {eps:.12e}, max combination {:.3e}, sector residual {:.3e}, bilinear residual {:.3e}, x pattern {:?}",
                t.max_combination(),
                t.sector_residual,
                t.bilinear_residual,
                t.x_pattern
            );
            Ok(exit::OK)
        }
    }
}

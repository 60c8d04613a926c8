//! Command line front end for the ADER / Lax-Wendroff FR solver.
//!
//! Exit codes: 0 on success, 1 for an invalid configuration, 2 when the run
//! diverges (any CSV recorded so far is still written).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use aderlw_core::driver::{eoc_study, ScanSettings};
use aderlw_core::io::{format_f64, write_diff_series, write_eoc_table, write_error_series};
use aderlw_core::{
    compare_schemes, run_simulation, stability_scan, BoundaryCondition, CorrectionKind, Error,
    FluxSpec, InitialCondition, NodeKind, ProblemSpec, RunConfig, Scheme,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "aderlw",
    version,
    about = "1-D ADER-FR and Lax-Wendroff FR solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scheme and write its error series.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "ader")]
        scheme: String,
        #[arg(long, default_value = "errors.csv")]
        out: PathBuf,
    },
    /// Run two schemes in lockstep and write their nodal difference.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Give exactly twice; defaults to ader and lw-d2.
        #[arg(long)]
        scheme: Vec<String>,
        #[arg(long, default_value = "diff.csv")]
        out: PathBuf,
    },
    /// Convergence study under repeated doubling of the element count.
    Eoc {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "ader")]
        scheme: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value = "eoc.csv")]
        out: PathBuf,
    },
    /// Largest stable CFL safety factor per scheme.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        /// Schemes to scan; all three when omitted.
        #[arg(long)]
        scheme: Vec<String>,
        #[arg(long, default_value_t = 0.05)]
        cfl_min: f64,
        #[arg(long, default_value_t = 3.0)]
        cfl_max: f64,
        #[arg(long, default_value_t = 0.05)]
        cfl_step: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Points {
    Gl,
    Gll,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Correction {
    Radau,
    G2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Bc {
    Periodic,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Flux {
    Linear,
    Burgers,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, conflicts_with = "dofs")]
    elements: Option<usize>,
    /// Degrees of freedom; must be divisible by degree + 1.
    #[arg(long)]
    dofs: Option<usize>,
    #[arg(long, value_enum, default_value = "gl")]
    points: Points,
    /// Defaults to the natural partner of --points (radau for gl, g2 for gll).
    #[arg(long, value_enum)]
    correction: Option<Correction>,
    #[arg(long)]
    force_pairing: bool,
    #[arg(long, default_value = "wavepacket")]
    ic: String,
    #[arg(long, value_enum, default_value = "periodic")]
    bc: Bc,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    speed: f64,
    #[arg(long, value_enum, default_value = "linear")]
    flux: Flux,
    #[arg(long, default_value_t = 0.9)]
    cfl: f64,
    #[arg(long, default_value_t = 0.4)]
    tfinal: f64,
    /// Steps between error samples (default: 1 for compare, 10 otherwise).
    #[arg(long)]
    record_interval: Option<usize>,
}

const DEFAULT_DOFS: usize = 240;
const DOMAIN: (f64, f64) = (-1.0, 1.0);

impl CommonArgs {
    fn to_config(&self, scheme: Scheme, default_record: usize) -> Result<RunConfig, Error> {
        let n1 = self.degree + 1;
        let n_elem = match (self.elements, self.dofs) {
            (Some(e), _) => e,
            (None, dofs) => {
                let dofs = dofs.unwrap_or(DEFAULT_DOFS);
                if dofs % n1 != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "{dofs} degrees of freedom are not divisible by degree + 1 = {n1}"
                    )));
                }
                dofs / n1
            }
        };
        let node_kind = match self.points {
            Points::Gl => NodeKind::GaussLegendre,
            Points::Gll => NodeKind::GaussLobattoLegendre,
        };
        let correction = match self.correction {
            Some(Correction::Radau) => CorrectionKind::Radau,
            Some(Correction::G2) => CorrectionKind::G2,
            None => match node_kind {
                NodeKind::GaussLegendre => CorrectionKind::Radau,
                NodeKind::GaussLobattoLegendre => CorrectionKind::G2,
            },
        };
        let flux = match self.flux {
            Flux::Linear => FluxSpec::LinearAdvection { a: self.speed },
            Flux::Burgers => FluxSpec::Burgers,
        };
        let bc = match self.bc {
            Bc::Periodic => BoundaryCondition::Periodic,
            Bc::Dirichlet => BoundaryCondition::DirichletInflow,
        };
        let ic: InitialCondition = self.ic.parse()?;
        let problem = ProblemSpec::new(flux, ic, bc, DOMAIN)?;
        let config = RunConfig {
            degree: self.degree,
            n_elem,
            node_kind,
            correction,
            force_pairing: self.force_pairing,
            scheme,
            problem,
            cfl_safety: self.cfl,
            t_final: self.tfinal,
            record_interval: self.record_interval.unwrap_or(default_record),
        };
        config.validate()?;
        Ok(config)
    }
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::BlowUp { .. } | Error::Numerical(_) => EXIT_BLOW_UP,
        _ => EXIT_INVALID,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Data(format!("cannot write {}: {e}", path.display())))
}

/// `<dir>/<stem>_<scheme>_errors.csv` next to the diff file.
pub fn companion_error_path(diff_path: &Path, scheme: Scheme) -> PathBuf {
    let stem = diff_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("diff");
    diff_path.with_file_name(format!("{stem}_{}_errors.csv", scheme.name()))
}

fn cmd_run(common: &CommonArgs, scheme: &str, out: &Path) -> Result<i32, Error> {
    let config = common.to_config(scheme.parse()?, 10)?;
    match run_simulation(config) {
        Ok(series) => {
            write_error_series(create(out)?, &series)?;
            Ok(EXIT_OK)
        }
        Err(failure) => {
            write_error_series(create(out)?, &failure.partial)?;
            eprintln!("error: {}", failure.error);
            Ok(exit_code(&failure.error))
        }
    }
}

fn cmd_compare(common: &CommonArgs, schemes: &[String], out: &Path) -> Result<i32, Error> {
    let (a, b) = match schemes {
        [] => (Scheme::Ader, Scheme::LwD2),
        [a, b] => (a.parse()?, b.parse()?),
        _ => {
            return Err(Error::InvalidConfig(
                "compare needs exactly two --scheme values".into(),
            ))
        }
    };
    let config_a = common.to_config(a, 1)?;
    let config_b = common.to_config(b, 1)?;
    let (cmp, failure) = match compare_schemes(config_a, config_b) {
        Ok(cmp) => (cmp, None),
        Err(e) => (e.partial, Some(e.error)),
    };
    write_diff_series(create(out)?, &cmp.diff)?;
    write_error_series(create(&companion_error_path(out, a))?, &cmp.errors_a)?;
    if b != a {
        write_error_series(create(&companion_error_path(out, b))?, &cmp.errors_b)?;
    }
    match failure {
        None => {
            println!("max linf_diff {}", format_f64(cmp.diff.max_diff()));
            Ok(EXIT_OK)
        }
        Some(error) => {
            eprintln!("error: {error}");
            Ok(exit_code(&error))
        }
    }
}

fn cmd_eoc(common: &CommonArgs, scheme: &str, levels: usize, out: &Path) -> Result<i32, Error> {
    let mut base = common.to_config(scheme.parse()?, 10)?;
    if common.elements.is_none() && common.dofs.is_none() {
        base.n_elem = 10;
    }
    let rows = eoc_study(&base, levels)?;
    println!("{:>8}  {:>24}  {:>8}", "n_elem", "l2_error", "order");
    for r in &rows {
        let order = r
            .order
            .map(|o| format!("{o:.3}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>8}  {:>24}  {:>8}",
            r.n_elem,
            format_f64(r.l2_error),
            order
        );
    }
    write_eoc_table(create(out)?, &rows)?;
    Ok(EXIT_OK)
}

fn cmd_scan(
    common: &CommonArgs,
    schemes: &[String],
    min: f64,
    max: f64,
    step: f64,
    steps: usize,
) -> Result<i32, Error> {
    if !(step > 0.0 && min > 0.0 && max >= min) {
        return Err(Error::InvalidConfig(
            "scan needs 0 < cfl-min <= cfl-max and cfl-step > 0".into(),
        ));
    }
    let schemes: Vec<Scheme> = if schemes.is_empty() {
        Scheme::ALL.to_vec()
    } else {
        schemes
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_, _>>()?
    };
    let template = common.to_config(Scheme::Ader, 10)?;
    let settings = ScanSettings {
        n_steps: steps,
        ..ScanSettings::uniform(min, max, step)
    };
    let results = stability_scan(&template, &schemes, &settings)?;
    println!("scheme,threshold");
    for r in results {
        let t = r
            .threshold
            .map(|t| format!("{t:.4}"))
            .unwrap_or_else(|| "none".into());
        println!("{},{t}", r.scheme);
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (including the program name) and runs the command.
pub fn parse_and_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run {
            common,
            scheme,
            out,
        } => cmd_run(common, scheme, out),
        Command::Compare {
            common,
            scheme,
            out,
        } => cmd_compare(common, scheme, out),
        Command::Eoc {
            common,
            scheme,
            levels,
            out,
        } => cmd_eoc(common, scheme, *levels, out),
        Command::Scan {
            common,
            scheme,
            cfl_min,
            cfl_max,
            cfl_step,
            steps,
        } => cmd_scan(common, scheme, *cfl_min, *cfl_max, *cfl_step, *steps),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use wshift_core::berger::{backward_extension_check, builtin_measure, mu_m, mu_x, verify_berger, LeqViolation, Measure};
use wshift_core::hyponormality::is_k_hyponormal;
use wshift_core::moments::{moment_matrix, MomentKey};
use wshift_core::positivity::{psd, PsdStatus, PsdWitness};
use wshift_core::shifts::{builtin_1d_shift, family_figure2, WeightField2D};
use wshift_core::{Mode, Scalar};

use wshift::config::parse_mode;
use wshift::format::{parse_field, parse_matrix, parse_measure, write_matrix, write_measure2d};
use wshift::report::{classify, thresholds, write_classify, write_thresholds};
use wshift::sweep::{format_witness, parse_grid, parse_k_list, run_sweep, write_rows};
use wshift::{parse_literal, selftest, Output, RunConfig, Threads};

/// Hyponormality and subnormality analysis of 2-variable weighted shifts.
///
/// Parameters are squared weights a2 = a², y2 = y², given as p/q, integers
/// or decimals. Decimals become the nearest rational with denominator at
/// most 10^6. Parameters stay exact; --mode only picks the PSD arithmetic.
#[derive(Parser)]
#[command(name = "wshift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Arithmetic for PSD tests: exact, or float with exact fallback on borderline cases.
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    mode: Mode,
    /// Bisection width and float eigenvalue tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Check M_u(k) for all u with u1, u2 <= this bound.
    #[arg(long, default_value_t = 10)]
    ubound: u32,
    /// Largest degree k.
    #[arg(long, default_value_t = 6)]
    kmax: u32,
    /// csv, json or pretty (default depends on the command).
    #[arg(long)]
    out: Option<Output>,
    /// Worker threads, or `auto`.
    #[arg(long, default_value = "auto")]
    threads: Threads,
}

impl Common {
    fn config(&self, default_out: Output) -> Result<RunConfig> {
        let cfg = RunConfig {
            mode: self.mode,
            tol: self.tol,
            u_bound: self.ubound,
            k_max: self.kmax,
            output: self.out.unwrap_or(default_out),
            threads: self.threads,
        };
        cfg.validate().map_err(|e| anyhow!(e))?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-k verdicts for the built-in family at one point, beside the closed-form expectation.
    Classify {
        #[arg(long)]
        a2: String,
        #[arg(long)]
        y2: String,
        #[command(flatten)]
        common: Common,
    },
    /// Bisect the y2 at which k-hyponormality switches off and compare with the closed form.
    Threshold {
        #[arg(long)]
        a2: String,
        /// Comma-separated degrees.
        #[arg(long, default_value = "2")]
        k: String,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every point of an (a2, y2) grid; one row per (a2, y2, k).
    Sweep {
        /// `lo:hi:n` or a comma list.
        #[arg(long)]
        a2: String,
        /// `lo:hi:n` or a comma list.
        #[arg(long)]
        y2: String,
        /// Comma-separated degrees (default 1..=kmax).
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the moments of a 1-variable shift with those of a measure.
    VerifyBerger {
        /// S_a, U_plus or x_seq.
        #[arg(long)]
        shift: String,
        #[arg(long = "shift-param")]
        shift_params: Vec<String>,
        /// mu_x, S_a_measure, lebesgue or point.
        #[arg(long, conflicts_with = "measure_file")]
        measure: Option<String>,
        #[arg(long = "measure-param")]
        measure_params: Vec<String>,
        /// Measure in the text format.
        #[arg(long)]
        measure_file: Option<PathBuf>,
        /// Highest moment compared.
        #[arg(long, default_value_t = 50)]
        nmax: u32,
    },
    /// Subnormality of the family's backward extension via its Berger measures.
    Backward {
        #[arg(long)]
        a2: String,
        #[arg(long)]
        y2: String,
        /// Print the constructed Berger measure when the extension is subnormal.
        #[arg(long)]
        show_measure: bool,
    },
    /// k-hyponormality of a weight field read from a file.
    Check {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Print M_u(k) in the matrix text format.
    MomentMatrix {
        #[arg(long, required_unless_present = "field")]
        a2: Option<String>,
        #[arg(long, required_unless_present = "field")]
        y2: Option<String>,
        #[arg(long, conflicts_with_all = ["a2", "y2"])]
        field: Option<PathBuf>,
        /// Base point `u1,u2`.
        #[arg(long, default_value = "0,0")]
        u: String,
        #[arg(long)]
        k: u32,
    },
    /// PSD verdict for a matrix file.
    Psd {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run reduced versions of the property suites.
    Selftest,
}

/// Parameters are always exact; `--mode` only selects the PSD arithmetic.
fn lit(s: &str) -> Result<Scalar> {
    parse_literal(s, Mode::Exact).with_context(|| format!("cannot parse `{}`", s))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn field_from(a2: Option<&str>, y2: Option<&str>, file: Option<&Path>, mode: Mode) -> Result<WeightField2D> {
    match (file, a2, y2) {
        (Some(p), _, _) => Ok(parse_field(&read(p)?, mode).with_context(|| p.display().to_string())?),
        (None, Some(a2), Some(y2)) => Ok(family_figure2(&lit(a2)?, &lit(y2)?)?),
        _ => bail!("give either --field or both --a2 and --y2"),
    }
}

fn warn_hypothesis(f: &WeightField2D) {
    if f.outside_hypothesis() {
        eprintln!("warning: outside hypothesis a2 <= 1/2, y2 <= 1; closed-form expectations are unverified here");
    }
}

/// Exit code 0 when everything agrees, 2 otherwise.
fn verdict_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Classify { a2, y2, common } => {
            let cfg = common.config(Output::Pretty)?;
            let (a2, y2) = (lit(&a2)?, lit(&y2)?);
            warn_hypothesis(&family_figure2(&a2, &y2)?);
            let report = classify(&a2, &y2, &cfg).map_err(|e| anyhow!(e))?;
            write_classify(&report, cfg.output, &mut out)?;
            Ok(verdict_code(report.all_agree()))
        }
        Command::Threshold { a2, k, common } => {
            let cfg = common.config(Output::Pretty)?;
            let a2 = lit(&a2)?;
            warn_hypothesis(&family_figure2(&a2, &Scalar::one())?);
            let ks = parse_k_list(&k).map_err(|e| anyhow!(e))?;
            let rows = thresholds(&a2, &ks, &cfg).map_err(|e| anyhow!(e))?;
            write_thresholds(&rows, cfg.output, &mut out)?;
            Ok(verdict_code(rows.iter().all(|r| r.confirmed())))
        }
        Command::Sweep { a2, y2, k, common } => {
            let cfg = common.config(Output::Csv)?;
            let a2s = parse_grid(&a2, Mode::Exact).map_err(|e| anyhow!("--a2: {}", e))?;
            let y2s = parse_grid(&y2, Mode::Exact).map_err(|e| anyhow!("--y2: {}", e))?;
            let ks = match k {
                Some(k) => parse_k_list(&k).map_err(|e| anyhow!(e))?,
                None => (1..=cfg.k_max).collect(),
            };
            let half = Scalar::ratio(1, 2);
            if a2s.iter().any(|a| *a > half) || y2s.iter().any(|y| *y > Scalar::one()) {
                eprintln!("warning: grid extends outside hypothesis a2 <= 1/2, y2 <= 1");
            }
            let rows = run_sweep(&a2s, &y2s, &ks, &cfg).map_err(|e| anyhow!(e))?;
            write_rows(&rows, cfg.output, &mut out)?;
            Ok(verdict_code(rows.iter().all(|r| r.agree)))
        }
        Command::VerifyBerger {
            shift,
            shift_params,
            measure,
            measure_params,
            measure_file,
            nmax,
        } => {
            let params = |ps: &[String]| ps.iter().map(|p| lit(p)).collect::<Result<Vec<_>>>();
            let w = builtin_1d_shift(&shift, &params(&shift_params)?)?;
            let mu = match (measure, measure_file) {
                (_, Some(p)) => parse_measure(&read(&p)?, Mode::Exact).with_context(|| p.display().to_string())?,
                (Some(name), None) => builtin_measure(&name, &params(&measure_params)?)?,
                (None, None) => bail!("give --measure or --measure-file"),
            };
            let Measure::OneVar(mu) = mu else {
                bail!("verify-berger needs a measure on the line, not a planar one");
            };
            let ok = verify_berger(&w, &mu, nmax);
            if ok {
                writeln!(out, "pass: moments 0..={} agree", nmax)?;
            } else {
                let first = (0..=nmax)
                    .find(|&n| wshift_core::moments::gamma_1d(&w, n) != mu.moment(n))
                    .unwrap_or(0);
                writeln!(
                    out,
                    "fail: moment {} is {} for the shift and {} for the measure",
                    first,
                    wshift_core::moments::gamma_1d(&w, first),
                    mu.moment(first)
                )?;
            }
            Ok(verdict_code(ok))
        }
        Command::Backward { a2, y2, show_measure } => {
            let (a2, y2) = (lit(&a2)?, lit(&y2)?);
            let report = backward_extension_check(&mu_m(&a2)?, &mu_x(&y2)?, &y2)?;
            if report.subnormal {
                writeln!(out, "subnormal")?;
            } else {
                writeln!(out, "not subnormal: {:?} fails", report.failed_condition.expect("failure carries a condition"))?;
                match &report.violation {
                    Some(LeqViolation::Atom { location, lhs, rhs }) => {
                        writeln!(out, "  witness: at t = {} the scaled marginal has mass {} but nu has {}", location, lhs, rhs)?
                    }
                    Some(LeqViolation::Density) => writeln!(out, "  witness: density difference is negative on [0,1]")?,
                    None => {}
                }
            }
            if let Some(norm) = &report.one_over_t_norm {
                writeln!(out, "  ||1/t|| = {}", norm)?;
            }
            if let Some(eq) = &report.equality_case {
                writeln!(out, "  equality case: measures equal {}, moments equal {}", eq.measures_equal, eq.moments_equal)?;
            }
            if let (true, Some(mu)) = (show_measure, &report.constructed_mu) {
                write!(out, "{}", write_measure2d(mu))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { field, k, common } => {
            let cfg = common.config(Output::Pretty)?;
            let f = parse_field(&read(&field)?, cfg.mode).with_context(|| field.display().to_string())?;
            warn_hypothesis(&f);
            let v = is_k_hyponormal(&f, k, cfg.u_bound, cfg.mode, cfg.tol)?;
            match v.witness_u {
                None => writeln!(out, "k={} pass (checked u1, u2 <= {})", k, v.checked_u_bound)?,
                Some(u) => writeln!(out, "k={} fail at u={}", k, format_witness(u))?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::MomentMatrix { a2, y2, field, u, k } => {
            let f = field_from(a2.as_deref(), y2.as_deref(), field.as_deref(), Mode::Exact)?;
            let (u1, u2) = u.split_once(',').ok_or_else(|| anyhow!("--u must be `u1,u2`"))?;
            let u = MomentKey::new(u1.trim().parse()?, u2.trim().parse()?);
            write!(out, "{}", write_matrix(&moment_matrix(&f, u, k).matrix))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Psd { matrix, mode, tol } => {
            let m = parse_matrix(&read(&matrix)?, mode).with_context(|| matrix.display().to_string())?;
            let v = psd(&m, mode, tol)?;
            let label = match v.status {
                PsdStatus::Psd => "psd",
                PsdStatus::NotPsd => "not psd",
                PsdStatus::Borderline => "borderline",
            };
            writeln!(out, "{}", label)?;
            match v.witness {
                Some(PsdWitness::NegativePivot { index, value }) => writeln!(out, "  pivot {} is {}", index, value)?,
                Some(PsdWitness::ZeroPivotCoupling { index, column }) => {
                    writeln!(out, "  pivot {} is zero but its row is nonzero in column {}", index, column)?
                }
                Some(PsdWitness::MinEigenvalue(x)) => writeln!(out, "  smallest eigenvalue ≈ {:e}", x)?,
                None => {}
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut failed = 0;
            for r in &results {
                match &r.outcome {
                    Ok(()) => writeln!(out, "ok    {}", r.name)?,
                    Err(e) => {
                        failed += 1;
                        writeln!(out, "FAIL  {}: {}", r.name, e)?;
                    }
                }
            }
            writeln!(out, "{} of {} checks passed", results.len() - failed, results.len())?;
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
    }
}

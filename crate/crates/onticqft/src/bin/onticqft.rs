//! Thin command-line front end over the verification engine.
//!
//! Exit codes: 0 on success, 1 when any check is unsatisfied, 2 on
//! usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use onticqft::cogwheel;
use onticqft::fermions;
use onticqft::fock;
use onticqft::verify::{BosonConfig, Report, RunConfig, SUITE_NAMES};
use onticqft::{C64, EngineError};

#[derive(Parser)]
#[command(name = "onticqft", version, about = "Ontic-state engine for non-interacting QFTs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify {
        /// Suite to run (repeatable); defaults to all suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Restrict cogwheel checks to a single dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Restrict bosonic configurations to this lattice size.
        #[arg(long)]
        modes: Option<usize>,
        /// Restrict bosonic configurations to this family count.
        #[arg(long)]
        families: Option<usize>,
        /// Restrict fermion-ring checks to a single K.
        #[arg(long = "K")]
        k: Option<usize>,
        /// Override every per-check tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the deterministic random streams.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Flat key=value configuration file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Summarize or convert a previously written JSON report.
    Report {
        /// Path to a JSON report produced by `verify`.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one narrative demonstration.
    Demo {
        /// One of: coherent-overlap, fermion-nilpotency,
        /// bosonic-dirac-failure, truncated-commutator.
        name: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, name = "K")]
        k: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                EngineError::Config { .. }
                | EngineError::UnknownSuite(_)
                | EngineError::UnknownDemo(_)
                | EngineError::Io(_)
                | EngineError::ReportParse(_) => 2,
                _ => 2,
            })
        }
    }
}

fn run(cli: Cli) -> onticqft::Result<ExitCode> {
    match cli.command {
        Command::Verify {
            suites,
            dim,
            modes,
            families,
            k,
            tol,
            seed,
            out,
            format,
            config,
        } => {
            let mut cfg = match config {
                Some(path) => parse_config_file(&path)?,
                None => RunConfig::default(),
            };
            if !suites.is_empty() {
                cfg.suites = suites;
            }
            if let Some(d) = dim {
                cfg.cogwheel_dims = vec![d];
                cfg.evolution_dims = vec![d];
                for bc in &mut cfg.boson_configs {
                    bc.trunc_dim = d;
                }
            }
            if let Some(m) = modes {
                for bc in &mut cfg.boson_configs {
                    bc.modes = m;
                }
            }
            if let Some(f) = families {
                cfg.boson_configs.retain(|bc| bc.families == f);
                if cfg.boson_configs.is_empty() {
                    cfg.boson_configs = vec![BosonConfig {
                        families: f,
                        modes: modes.unwrap_or(1),
                        trunc_dim: dim.unwrap_or(2),
                    }];
                }
            }
            if let Some(k) = k {
                cfg.fermion_k = vec![k];
            }
            if let Some(t) = tol {
                cfg.tol_override = Some(t);
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = onticqft::verify::run_suite(&cfg)?;
            let rendered = render(&report, format);
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => println!("{rendered}"),
            }
            let failures = report.failures();
            if failures.is_empty() {
                eprintln!("ok: {} checks satisfied", report.checks.len());
                Ok(ExitCode::SUCCESS)
            } else {
                for f in failures {
                    eprintln!(
                        "FAIL {} measured={:.3e} tolerance={:.3e}{}",
                        f.id,
                        f.measured,
                        f.tolerance,
                        if f.expected_fail { " (expected failure missing)" } else { "" }
                    );
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Report { input, format, out } => {
            let text = std::fs::read_to_string(&input)?;
            let report = Report::from_json(&text)?;
            let rendered = render(&report, format);
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => println!("{rendered}"),
            }
            let (sat, total) = (
                report.checks.iter().filter(|c| c.satisfied()).count(),
                report.checks.len(),
            );
            eprintln!("{sat}/{total} checks satisfied");
            Ok(if sat == total {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Demo { name, dim, k } => {
            run_demo(&name, dim, k)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => {
            let mut out = String::from(
                "id,kind,measured,tolerance,passed,expected_fail,satisfied,wall_clock_ms\n",
            );
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{:?},{:e},{:e},{},{},{},{:.3}\n",
                    c.id,
                    c.kind,
                    c.measured,
                    c.tolerance,
                    c.passed,
                    c.expected_fail,
                    c.satisfied(),
                    c.wall_clock_ms
                ));
            }
            out
        }
    }
}

/// Flat `key=value` file, one per line; `#` starts a comment.
fn parse_config_file(path: &PathBuf) -> onticqft::Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            EngineError::config(
                format!("line {}", lineno + 1),
                "expected key=value",
            )
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |msg: &str| EngineError::config(key, msg);
        match key {
            "suites" => {
                cfg.suites = value.split(',').map(|s| s.trim().to_string()).collect()
            }
            "cogwheel_dims" => cfg.cogwheel_dims = parse_list(value).map_err(|e| bad(&e))?,
            "evolution_dims" => cfg.evolution_dims = parse_list(value).map_err(|e| bad(&e))?,
            "fermion_k" => cfg.fermion_k = parse_list(value).map_err(|e| bad(&e))?,
            "c" => cfg.c = value.parse().map_err(|_| bad("expected a number"))?,
            "hbar" => cfg.hbar = value.parse().map_err(|_| bad("expected a number"))?,
            "mu" => cfg.mu = value.parse().map_err(|_| bad("expected a number"))?,
            "delta_k" => cfg.delta_k = value.parse().map_err(|_| bad("expected a number"))?,
            "delta_r" => cfg.delta_r = value.parse().map_err(|_| bad("expected a number"))?,
            "tol" => {
                cfg.tol_override =
                    Some(value.parse().map_err(|_| bad("expected a number"))?)
            }
            "seed" => cfg.seed = value.parse().map_err(|_| bad("expected an integer"))?,
            "random_states" => {
                cfg.random_states = value.parse().map_err(|_| bad("expected an integer"))?
            }
            "random_times" => {
                cfg.random_times = value.parse().map_err(|_| bad("expected an integer"))?
            }
            other => {
                return Err(EngineError::config(
                    other,
                    format!(
                        "unknown key; valid suites are {}",
                        SUITE_NAMES.join(", ")
                    ),
                ))
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_list(value: &str) -> std::result::Result<Vec<usize>, String> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{s}` is not an integer"))
        })
        .collect()
}

fn run_demo(name: &str, dim: Option<usize>, k: Option<usize>) -> onticqft::Result<()> {
    match name {
        "coherent-overlap" => {
            let d = dim.unwrap_or(30);
            println!("Coherent states are near-classical but never orthogonal.");
            println!("Truncation D = {d}; overlaps along the unit circle in z:\n");
            let z0 = C64::new(1.0, 0.0);
            let s0 = cogwheel::coherent_state(d, z0)?;
            println!("{:>10}  {:>12}  {:>12}", "angle", "measured", "exact");
            for m in 0..8 {
                let phi = std::f64::consts::TAU * m as f64 / 8.0;
                let z = C64::from_polar(1.0, phi);
                let measured = s0.inner(&cogwheel::coherent_state(d, z)?)?.norm();
                let exact = cogwheel::coherent_overlap_exact_modulus(z0, z);
                println!("{phi:>10.4}  {measured:>12.6}  {exact:>12.6}");
            }
            println!("\nMinimum overlap exp(-2) = {:.6} at the antipode;", (-2.0f64).exp());
            println!("a Gram matrix this far from I admits no ontic relabeling.");
        }
        "fermion-nilpotency" => {
            let max_n = k.unwrap_or(4);
            let rep = cogwheel::fermion_phase_constraint_demo(max_n)?;
            println!("A fermionic mode squares to zero, so a phase state");
            println!("|phi> = sum_n e^(i phi n) |n> has no components with n >= 2.\n");
            println!("{:>4}  {:>12}", "n", "||P_n |phi>||");
            for (n, norm) in rep.projection_norms.iter().enumerate() {
                println!("{n:>4}  {norm:>12.6}");
            }
            println!("\nOnly n = 0, 1 survive: the fermionic cogwheel has two teeth.");
        }
        "bosonic-dirac-failure" => {
            let d = dim.unwrap_or(4);
            let kc = k.unwrap_or(2);
            let rep = fermions::bosonic_dirac_failure_demo(d, kc)?;
            println!("Building Dirac-style site operators from bosonic modes fails:");
            println!("max |{{B_i, B_j^dag}} - delta_ij| = {:.6}", rep.max_anticommutator_deviation);
            println!("max off-diagonal Gram entry     = {:.6}", rep.max_offdiagonal_gram);
            println!("fermionic control deviation     = {:.3e}", rep.fermionic_control_deviation);
            println!("\nThe anticommutators are not c-numbers and the would-be site");
            println!("states are not orthogonal, so no ontic basis emerges.");
        }
        "truncated-commutator" => {
            let d = dim.unwrap_or(4);
            let (a, adag, _) = fock::make_boson_mode(d)?;
            let comm = a.commutator(&adag)?;
            println!("Truncated at D = {d}, [A, A\u{2020}] is not the identity:");
            println!("{:>4}  {:>8}", "n", "entry");
            for n in 0..d {
                println!("{n:>4}  {:>8.1}", comm.entry(n, n).re);
            }
            println!("\nThe top level carries -(D-1) = {}; the canonical", -((d as i64) - 1));
            println!("commutation relation only holds on states below the cutoff.");
        }
        other => return Err(EngineError::UnknownDemo(other.to_string())),
    }
    Ok(())
}

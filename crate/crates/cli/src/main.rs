//! Command-line front end: generate benchmarks, decide realizability,
//! synthesize controllers and verify closed systems.
//!
//! Exit codes: 10 realizable/safe, 20 unrealizable/unsafe, 1 for errors,
//! unknown verdicts and usage problems.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use safesynth_core::aig::{write_aag, ControllerCircuit, SafetySpec};
use safesynth_core::bench::{gen_benchmark, BenchParams, Family};
use safesynth_core::cnf::CnfFormula;
use safesynth_core::extract::{
    extract_qbf_learn, extract_sat_learn, ExtractConfig, ExtractStats,
};
use safesynth_core::portfolio::{run_portfolio_extract, run_portfolio_win, PortfolioConfig};
use safesynth_core::templ::{
    templ_schedule, ScheduleOutcome, TemplConfig, TemplMethod, TemplateKind,
};
use safesynth_core::verify::{explicit_attractor, verify_controller, ExplicitGame};
use safesynth_core::win::{
    compute_winning, export_winning_area, import_winning_area, Backend, RegionKind, Verdict,
    WinConfig, WinStats, WinningOutcome,
};

const EXIT_REALIZABLE: u8 = 10;
const EXIT_UNREALIZABLE: u8 = 20;

#[derive(Parser)]
#[command(
    name = "safesynth",
    about = "SAT- and QBF-based reactive synthesis for AIGER safety specifications",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a parametric benchmark instance.
    Gen(GenArgs),
    /// Decide realizability of a specification.
    Realizability(RealizabilityArgs),
    /// Synthesize a controller circuit and write the closed system.
    Synth(SynthArgs),
    /// Model-check a closed system (no controllable inputs left).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Benchmark family.
    #[arg(long)]
    family: Family,
    /// Size parameter.
    #[arg(long)]
    k: u32,
    /// Remove the rescuing control path.
    #[arg(long)]
    unrealizable: bool,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Sat1,
    Sat1Rg,
    Sat1Rge,
    Qbf,
    TemplSat,
    TemplQbf,
    Portfolio,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExtractArg {
    SatLearn,
    SatLearnDep,
    SatLearnDepMin,
    QbfLearn,
    Portfolio,
}

#[derive(Args)]
struct BackendOpts {
    /// Winning-region backend.
    #[arg(long, value_enum, default_value = "sat1-rge")]
    backend: BackendArg,
    /// Template shape for the template backends.
    #[arg(long, value_enum, default_value = "cnf")]
    template_kind: TemplateKindArg,
    /// Worker count for the portfolio backend.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Random seed for solver heuristics and simulation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overall time limit in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Write key=value statistics to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Export the winning area (DIMACS with a name map).
    #[arg(long)]
    export_w: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TemplateKindArg {
    Cnf,
    Aig,
}

#[derive(Args)]
struct RealizabilityArgs {
    /// The specification (ASCII aag).
    spec: PathBuf,
    #[command(flatten)]
    opts: BackendOpts,
}

#[derive(Args)]
struct SynthArgs {
    /// The specification (ASCII aag).
    spec: PathBuf,
    #[command(flatten)]
    opts: BackendOpts,
    /// Circuit extraction engine.
    #[arg(long, value_enum, default_value = "sat-learn-dep")]
    extract: ExtractArg,
    /// Re-use a previously exported winning area instead of computing one.
    #[arg(long)]
    import_w: Option<PathBuf>,
    /// Verify the synthesized controller (induction plus simulation).
    #[arg(long)]
    verify: bool,
    /// Where to write the closed system (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A closed system produced by `synth`.
    implementation: PathBuf,
    /// Random seed for the simulation episode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random simulation steps.
    #[arg(long, default_value_t = 10_000)]
    sim_steps: u64,
}

struct RunStats {
    verdict: Verdict,
    win: WinStats,
    gates: Option<usize>,
    time_ms: u64,
}

fn write_stats(path: &PathBuf, stats: &RunStats) -> Result<()> {
    let mut s = String::new();
    s.push_str(&format!(
        "verdict={}\n",
        match stats.verdict {
            Verdict::Realizable => "realizable",
            Verdict::Unrealizable => "unrealizable",
        }
    ));
    s.push_str(&format!("refinements={}\n", stats.win.refinements));
    s.push_str(&format!("sat_calls={}\n", stats.win.sat_calls));
    s.push_str(&format!("qbf_calls={}\n", stats.win.qbf_calls));
    s.push_str(&format!("gates={}\n", stats.gates.unwrap_or(0)));
    s.push_str(&format!("time_ms={}\n", stats.time_ms));
    fs::write(path, s).with_context(|| format!("writing stats to {}", path.display()))?;
    Ok(())
}

fn load_spec(path: &PathBuf) -> Result<SafetySpec> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SafetySpec::parse_aag(&text).with_context(|| format!("parsing {}", path.display()))
}

fn win_config(opts: &BackendOpts, backend: Backend, rg: bool, expand: bool) -> WinConfig {
    WinConfig {
        backend,
        opt_rg: rg,
        expand_cex: expand,
        expand_gen: expand,
        seed: opts.seed,
        time_limit_ms: opts.timeout_ms,
        ..WinConfig::default()
    }
}

fn run_win_backend(spec: &SafetySpec, opts: &BackendOpts) -> Result<WinningOutcome> {
    let outcome = match opts.backend {
        BackendArg::Sat1 => compute_winning(spec, &win_config(opts, Backend::Sat1, false, false))?,
        BackendArg::Sat1Rg => {
            compute_winning(spec, &win_config(opts, Backend::Sat1, true, false))?
        }
        BackendArg::Sat1Rge => {
            compute_winning(spec, &win_config(opts, Backend::Sat1, true, true))?
        }
        BackendArg::Qbf => compute_winning(spec, &win_config(opts, Backend::Qbf, false, false))?,
        BackendArg::TemplSat | BackendArg::TemplQbf => {
            let method = if opts.backend == BackendArg::TemplSat {
                TemplMethod::Sat
            } else {
                TemplMethod::Qbf
            };
            let kind = match opts.template_kind {
                TemplateKindArg::Cnf => TemplateKind::Cnf,
                TemplateKindArg::Aig => TemplateKind::Aig,
            };
            let cfg = TemplConfig {
                seed: opts.seed,
                time_limit_ms: opts.timeout_ms,
                ..TemplConfig::default()
            };
            match templ_schedule(spec, kind, method, &CnfFormula::truth(), &cfg)? {
                ScheduleOutcome::Decided(out) => out,
                ScheduleOutcome::Unknown => bail!("template backend exhausted its budget: unknown"),
            }
        }
        BackendArg::Portfolio => {
            let cfg = PortfolioConfig {
                seed: opts.seed,
                time_limit_ms: opts.timeout_ms,
                ..PortfolioConfig::default()
            };
            run_portfolio_win(spec, opts.threads, &cfg)?
        }
    };
    Ok(outcome)
}

fn run_extraction(
    spec: &SafetySpec,
    area: &CnfFormula,
    which: ExtractArg,
    opts: &BackendOpts,
    elapsed_ms: u64,
) -> Result<(ControllerCircuit, ExtractStats)> {
    // when a deadline is known, minimize only while plenty of budget
    // remains relative to the time already spent
    let ratio_allows_minimize = opts
        .timeout_ms
        .map(|total| total.saturating_sub(elapsed_ms) > 10 * elapsed_ms.max(1))
        .unwrap_or(true);
    let base = ExtractConfig {
        seed: opts.seed,
        time_limit_ms: opts.timeout_ms.map(|t| t.saturating_sub(elapsed_ms)),
        ..ExtractConfig::default()
    };
    let result = match which {
        ExtractArg::SatLearn => extract_sat_learn(spec, area, &base)?,
        ExtractArg::SatLearnDep => extract_sat_learn(
            spec,
            area,
            &ExtractConfig {
                dep_opt: true,
                ..base
            },
        )?,
        ExtractArg::SatLearnDepMin => extract_sat_learn(
            spec,
            area,
            &ExtractConfig {
                dep_opt: true,
                minimize: true,
                ..base
            },
        )?,
        ExtractArg::QbfLearn => extract_qbf_learn(spec, area, &base)?,
        ExtractArg::Portfolio => {
            let cfg = PortfolioConfig {
                seed: opts.seed,
                time_limit_ms: base.time_limit_ms,
                ..PortfolioConfig::default()
            };
            run_portfolio_extract(spec, area, opts.threads, ratio_allows_minimize, &cfg)?
        }
    };
    Ok(result)
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let params = BenchParams {
        family: args.family,
        k: args.k,
        unrealizable: args.unrealizable,
    };
    let text = gen_benchmark(&params)?;
    match &args.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", text),
    }
    Ok(0)
}

fn cmd_realizability(args: &RealizabilityArgs) -> Result<u8> {
    let spec = load_spec(&args.spec)?;
    let started = Instant::now();
    let outcome = run_win_backend(&spec, &args.opts)?;
    let time_ms = started.elapsed().as_millis() as u64;
    if let Some(path) = &args.opts.export_w {
        if outcome.verdict == Verdict::Realizable {
            fs::write(path, export_winning_area(&spec, &outcome))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    if let Some(path) = &args.opts.stats {
        write_stats(
            path,
            &RunStats {
                verdict: outcome.verdict,
                win: outcome.stats.clone(),
                gates: None,
                time_ms,
            },
        )?;
    }
    match outcome.verdict {
        Verdict::Realizable => {
            println!("realizable ({})", describe_kind(outcome.kind));
            Ok(EXIT_REALIZABLE)
        }
        Verdict::Unrealizable => {
            println!("unrealizable");
            Ok(EXIT_UNREALIZABLE)
        }
    }
}

fn describe_kind(kind: RegionKind) -> &'static str {
    match kind {
        RegionKind::WinningRegion => "winning region",
        RegionKind::WinningArea => "winning area",
        RegionKind::RealizabilityOnly => "verdict only",
    }
}

fn cmd_synth(args: &SynthArgs) -> Result<u8> {
    let spec = load_spec(&args.spec)?;
    let started = Instant::now();
    let (area, win_stats, kind) = match &args.import_w {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let area = import_winning_area(&spec, &text)?;
            (area, WinStats::default(), RegionKind::WinningArea)
        }
        None => {
            let outcome = run_win_backend(&spec, &args.opts)?;
            match outcome.verdict {
                Verdict::Unrealizable => {
                    if let Some(path) = &args.opts.stats {
                        write_stats(
                            path,
                            &RunStats {
                                verdict: Verdict::Unrealizable,
                                win: outcome.stats.clone(),
                                gates: None,
                                time_ms: started.elapsed().as_millis() as u64,
                            },
                        )?;
                    }
                    println!("unrealizable");
                    return Ok(EXIT_UNREALIZABLE);
                }
                Verdict::Realizable => {
                    let area = outcome.region.clone().expect("realizable outcome");
                    if let Some(path) = &args.opts.export_w {
                        fs::write(path, export_winning_area(&spec, &outcome))
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    (area, outcome.stats, outcome.kind)
                }
            }
        }
    };
    if kind == RegionKind::RealizabilityOnly {
        bail!("the selected backend produced a verdict-only region; extraction needs a winning area");
    }
    let elapsed = started.elapsed().as_millis() as u64;
    let (controller, extract_stats) =
        run_extraction(&spec, &area, args.extract, &args.opts, elapsed)?;
    if args.verify {
        let report = verify_controller(&spec, &controller, &area, 10_000, args.opts.seed)?;
        if !report.all_pass() {
            bail!("controller failed verification:\n{}", report.to_text());
        }
        eprintln!("controller verified: induction and simulation clean");
    }
    let text = write_aag(&spec, &controller)?;
    match &args.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", text),
    }
    if let Some(path) = &args.opts.stats {
        write_stats(
            path,
            &RunStats {
                verdict: Verdict::Realizable,
                win: win_stats,
                gates: Some(extract_stats.gates),
                time_ms: started.elapsed().as_millis() as u64,
            },
        )?;
    }
    println!(
        "realizable; controller with {} gates written",
        extract_stats.gates
    );
    Ok(EXIT_REALIZABLE)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let spec = load_spec(&args.implementation)?;
    if !spec.controls.is_empty() {
        bail!(
            "{} still has {} controllable inputs; expected a closed system",
            args.implementation.display(),
            spec.controls.len()
        );
    }
    // model-check: the game with no controls is safe iff realizable
    let symbolic = compute_winning(
        &spec,
        &WinConfig {
            seed: args.seed,
            ..WinConfig::default()
        },
    )?;
    let safe = symbolic.verdict == Verdict::Realizable;
    // cross-check against the explicit oracle when within budget
    if let Ok(region) = explicit_attractor(&spec) {
        let game = ExplicitGame::build(&spec)?;
        let explicit_safe = region.contains(game.initial);
        if explicit_safe != safe {
            bail!("internal disagreement between symbolic and explicit verdicts");
        }
    }
    if safe {
        println!("safe: error output unreachable");
        Ok(EXIT_REALIZABLE)
    } else {
        println!("unsafe: the environment can raise the error output");
        Ok(EXIT_UNREALIZABLE)
    }
}

fn run() -> Result<u8> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{}", e);
            return Ok(0);
        }
        Err(e) => return Err(anyhow!("{}", e)),
    };
    match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Realizability(args) => cmd_realizability(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}

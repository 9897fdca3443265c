//! Command-line driver for the `evercommit` simulation library.
//!
//! Four subcommands: `run` plays the three-message proof protocol on an
//! instance file, `game` plays one of the security games and reports the
//! measured advantage or win rate, `bound` prints an instance's soundness
//! bound by exact eigensolver, and `make-instance` writes the two bundled
//! instances to disk.
//!
//! Every command emits a single JSON report on stdout (and, with `--out`,
//! the same bytes to a file). Reports embed the full effective
//! configuration, including the resolved seed, so a run can be reproduced
//! from its own output. With the same seed and `--jobs 1` a rerun is
//! byte-identical except for the trailing `timing_ms` field.
//!
//! Exit codes: 0 on success (for `run`, success means the verifier
//! accepted), 1 when a protocol run ends in rejection, 2 on configuration
//! errors — missing or malformed files, unknown names, invalid parameters.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;

use evercommit::experiments::{
    exp_bit_ever_hide, exp_c_hide, exp_ever_hide, exp_otcd, exp_unpre, HybridMode, Strategy,
};
use evercommit::protocol::{
    run_sequential, Instance, InstanceKind, ProverKind, RunParams, TranscriptWire,
};
use evercommit::stats::{AdvantageEstimate, RateEstimate};
use evercommit::{CcdParams, CommitParams, SkeParams};

#[derive(Parser)]
#[command(
    name = "evercommit",
    version,
    about = "Desk-scale simulator for commitments with certified deletion \
             and the proof protocol built on them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the three-message proof protocol on an instance file.
    Run(RunArgs),
    /// Play a security game and report the advantage or win rate.
    Game(GameArgs),
    /// Print an instance's soundness bound (top eigenvalue, 6 decimals).
    Bound(BoundArgs),
    /// Write the bundled example instances to JSON files.
    MakeInstance(MakeInstanceArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance description file (JSON, as written by make-instance).
    #[arg(long)]
    instance: PathBuf,
    /// Prover behaviour: honest, optimal, wrong-witness, decommit-liar.
    #[arg(long, default_value = "honest")]
    cheater: String,
    /// Sequential rounds; the aggregate accepts only if every round does.
    #[arg(long, default_value_t = 1)]
    seq: usize,
    #[command(flatten)]
    pads: PadArgs,
    #[command(flatten)]
    common: CommonArgs,
}

/// Width overrides for the per-pad bit commitments used by `run`.
#[derive(Args)]
struct PadArgs {
    /// Ciphertext register width (qubits per pad commitment).
    #[arg(long)]
    mu: Option<usize>,
    /// Computational-basis positions within the register.
    #[arg(long)]
    mu_comp: Option<usize>,
    /// Tolerated certificate mismatches on the conjugate positions.
    #[arg(long)]
    threshold: Option<usize>,
    /// Committed-value width for the key commitment.
    #[arg(long)]
    s: Option<usize>,
    /// Commitment randomness width.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct GameArgs {
    /// Which game: otcd, everhide, chide, unpre, bit-everhide.
    game: String,
    /// Adversary strategy by name.
    #[arg(long, default_value = "honest-delete")]
    strategy: String,
    /// Per-position measurement probability (partial-measure only).
    #[arg(long)]
    fraction: Option<f64>,
    /// Trials per challenge arm.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Oracle rewiring for everhide/bit-everhide: real, hyb1, hyb2.
    #[arg(long)]
    mode: Option<String>,
    /// Parameter preset: small (fast, toy widths) or default.
    #[arg(long, default_value = "small")]
    preset: String,
    /// Message width in bits (may be overridden per preset).
    #[arg(long)]
    msg_len: Option<usize>,
    /// Commitments per round (bit-everhide only).
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    pads: PadArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BoundArgs {
    /// Instance description file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MakeInstanceArgs {
    /// Directory to write ghz.json and frustrated.json into.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

/// Flags shared by the randomized commands.
#[derive(Args)]
struct CommonArgs {
    /// Master seed; 0 draws one from system entropy and reports it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trial batches; 1 is the reproducibility default,
    /// 0 uses every core. Results are identical at any thread count.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Game(args) => cmd_game(args),
        Command::Bound(args) => cmd_bound(args),
        Command::MakeInstance(args) => cmd_make_instance(args),
    }
}

// --- run -----------------------------------------------------------------

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    instance: String,
    kind: &'static str,
    cheater: &'static str,
    seq: usize,
    seed: u64,
    jobs: usize,
    params: RunParams,
    accepted: bool,
    prover_out: bool,
    verifier_out: Option<bool>,
    rounds: Vec<TranscriptWire>,
    timing_ms: u64,
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let started = Instant::now();
    configure_jobs(args.common.jobs)?;
    let seed = resolve_seed(args.common.seed)?;
    let instance = load_instance(&args.instance)?;
    let prover = ProverKind::parse(&args.cheater)?;
    let params = run_params(&args.pads)?;

    let (transcripts, joint) = run_sequential(&instance, &params, prover, args.seq, seed)?;
    let report = RunReport {
        command: "run",
        instance: args.instance.display().to_string(),
        kind: kind_name(instance.kind()),
        cheater: prover.name(),
        seq: args.seq,
        seed,
        jobs: args.common.jobs,
        params,
        accepted: joint.accepted(),
        prover_out: joint.prover_accepts,
        verifier_out: joint.verifier_accepts,
        rounds: transcripts.iter().map(|t| t.to_wire()).collect(),
        timing_ms: started.elapsed().as_millis() as u64,
    };
    emit(&report, args.common.out.as_deref())?;
    Ok(if joint.accepted() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

// --- game ----------------------------------------------------------------

#[derive(Serialize)]
struct GameReport {
    command: &'static str,
    game: String,
    strategy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    params: serde_json::Value,
    seed: u64,
    jobs: usize,
    #[serde(flatten)]
    outcome: GameOutcomeReport,
    timing_ms: u64,
}

#[derive(Serialize)]
#[serde(untagged)]
enum GameOutcomeReport {
    Advantage(AdvantageEstimate),
    Rate(RateEstimate),
}

fn cmd_game(args: GameArgs) -> Result<ExitCode> {
    let started = Instant::now();
    configure_jobs(args.common.jobs)?;
    let seed = resolve_seed(args.common.seed)?;

    let mut strategy = Strategy::parse(&args.strategy).ok_or_else(|| {
        anyhow!(
            "unknown strategy '{}'; known strategies: {}",
            args.strategy,
            Strategy::ALL_NAMES.join(", ")
        )
    })?;
    let fraction = match (args.fraction, &mut strategy) {
        (Some(p), Strategy::PartialMeasure { fraction }) => {
            *fraction = p;
            Some(p)
        }
        (Some(_), _) => bail!("--fraction only applies to --strategy partial-measure"),
        (None, Strategy::PartialMeasure { fraction }) => Some(*fraction),
        (None, _) => None,
    };
    strategy.validate()?;
    let small = match args.preset.as_str() {
        "small" => true,
        "default" => false,
        other => bail!("unknown preset '{other}'; known presets: small, default"),
    };
    let mode = match &args.mode {
        None => HybridMode::Real,
        Some(name) => HybridMode::parse(name)
            .ok_or_else(|| anyhow!("unknown mode '{name}'; known modes: real, hyb1, hyb2"))?,
    };

    let (params, n, outcome) =
        play_game(&args, strategy, small, mode, seed).with_context(|| {
            format!("game '{}' with strategy '{}' failed", args.game, args.strategy)
        })?;

    let report = GameReport {
        command: "game",
        game: args.game.clone(),
        strategy: strategy.name(),
        mode: args.mode.as_ref().map(|_| mode.name()),
        fraction,
        n,
        params,
        seed,
        jobs: args.common.jobs,
        outcome,
        timing_ms: started.elapsed().as_millis() as u64,
    };
    emit(&report, args.common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// Build the per-game parameters and play one game. Returns the effective
/// parameter echo, the commitment count (bit-everhide only) and the outcome.
fn play_game(
    args: &GameArgs,
    strategy: Strategy,
    small: bool,
    mode: HybridMode,
    seed: u64,
) -> Result<(serde_json::Value, Option<usize>, GameOutcomeReport)> {
    let trials = args.trials;
    let reject_mode = || {
        if args.mode.is_some() {
            bail!("--mode only applies to everhide and bit-everhide");
        }
        Ok(())
    };
    let reject_n = || {
        if args.n.is_some() {
            bail!("--n only applies to bit-everhide");
        }
        Ok(())
    };
    match args.game.as_str() {
        "otcd" => {
            reject_mode()?;
            reject_n()?;
            reject_overrides(&args.pads, &["s", "t"])?;
            let params = ske_params(args, small)?;
            let est = exp_otcd(&strategy, params, trials, seed)?;
            Ok((serde_json::to_value(params)?, None, GameOutcomeReport::Advantage(est)))
        }
        "everhide" => {
            reject_n()?;
            let params = ccd_params(args, small, false)?;
            let est = exp_ever_hide(&strategy, &params, trials, seed, mode)?;
            Ok((serde_json::to_value(params)?, None, GameOutcomeReport::Advantage(est)))
        }
        "chide" => {
            reject_mode()?;
            reject_n()?;
            let params = ccd_params(args, small, false)?;
            let est = exp_c_hide(&strategy, &params, trials, seed)?;
            Ok((serde_json::to_value(params)?, None, GameOutcomeReport::Advantage(est)))
        }
        "unpre" => {
            reject_mode()?;
            reject_n()?;
            reject_overrides(&args.pads, &["mu", "mu-comp", "threshold"])?;
            if args.msg_len.is_some() {
                bail!("--msg-len does not apply to unpre");
            }
            let params = commit_params(&args.pads, small)?;
            let est = exp_unpre(&strategy, params, trials, seed)?;
            Ok((serde_json::to_value(params)?, None, GameOutcomeReport::Rate(est)))
        }
        "bit-everhide" => {
            if args.msg_len.is_some() {
                bail!("bit-everhide always commits bit-by-bit; use --n for the message width");
            }
            let params = ccd_params(args, small, true)?;
            let n = args.n.unwrap_or(4);
            let est = exp_bit_ever_hide(&strategy, n, &params, trials, seed)?;
            Ok((serde_json::to_value(params)?, Some(n), GameOutcomeReport::Advantage(est)))
        }
        other => bail!(
            "unknown game '{other}'; known games: otcd, everhide, chide, unpre, bit-everhide"
        ),
    }
}

/// Encryption-scheme parameters for `otcd`.
fn ske_params(args: &GameArgs, small: bool) -> Result<SkeParams> {
    let base = if small { SkeParams::small() } else { SkeParams::default_desk() };
    Ok(SkeParams::new(
        args.msg_len.unwrap_or(base.msg_len),
        args.pads.mu.unwrap_or(base.mu),
        args.pads.mu_comp.unwrap_or(base.mu_comp),
        args.pads.threshold.unwrap_or(base.cert_threshold),
    )?)
}

/// Commitment parameters for the hiding games. `single_bit` pins the
/// message width to one bit with the bit-everhide register widths.
fn ccd_params(args: &GameArgs, small: bool, single_bit: bool) -> Result<CcdParams> {
    let base = if single_bit {
        CcdParams::single_bit(8, 4, commit_params(&args.pads, small)?)?
    } else if small {
        CcdParams::small()
    } else {
        CcdParams::default_desk()
    };
    let ske = SkeParams::new(
        if single_bit { 1 } else { args.msg_len.unwrap_or(base.ske.msg_len) },
        args.pads.mu.unwrap_or(base.ske.mu),
        args.pads.mu_comp.unwrap_or(base.ske.mu_comp),
        args.pads.threshold.unwrap_or(base.ske.cert_threshold),
    )?;
    let commit = CommitParams::new(
        args.pads.s.unwrap_or(base.commit.s),
        args.pads.t.unwrap_or(base.commit.t),
    )?;
    Ok(CcdParams::new(ske, commit)?)
}

/// Classical-commitment widths for `unpre` (and the bit-everhide pads).
fn commit_params(pads: &PadArgs, small: bool) -> Result<CommitParams> {
    let base = if small { CommitParams::new(8, 8)? } else { CommitParams::new(16, 16)? };
    Ok(CommitParams::new(pads.s.unwrap_or(base.s), pads.t.unwrap_or(base.t))?)
}

/// Refuse width flags that the chosen game ignores: silently dropping a
/// parameter the caller spelled out would misreport the effective config.
fn reject_overrides(pads: &PadArgs, names: &[&str]) -> Result<()> {
    for name in names {
        let given = match *name {
            "mu" => pads.mu.is_some(),
            "mu-comp" => pads.mu_comp.is_some(),
            "threshold" => pads.threshold.is_some(),
            "s" => pads.s.is_some(),
            "t" => pads.t.is_some(),
            _ => unreachable!("unknown override name {name}"),
        };
        if given {
            bail!("--{name} does not apply to this game");
        }
    }
    Ok(())
}

// --- bound ---------------------------------------------------------------

#[derive(Serialize)]
struct BoundReport {
    command: &'static str,
    instance: String,
    kind: &'static str,
    qubits: usize,
    checks: usize,
    /// Top eigenvalue of the averaged check operator, fixed 6 decimals.
    bound: String,
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode> {
    let instance = load_instance(&args.instance)?;
    let bound = instance.soundness_bound()?;
    let report = BoundReport {
        command: "bound",
        instance: args.instance.display().to_string(),
        kind: kind_name(instance.kind()),
        qubits: instance.num_qubits(),
        checks: instance.m(),
        bound: format!("{bound:.6}"),
    };
    emit(&report, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

// --- make-instance ---------------------------------------------------------

#[derive(Serialize)]
struct MakeInstanceReport {
    command: &'static str,
    written: Vec<String>,
}

fn cmd_make_instance(args: MakeInstanceArgs) -> Result<ExitCode> {
    let mut written = Vec::new();
    for (name, instance) in
        [("ghz.json", Instance::ghz3()), ("frustrated.json", Instance::frustrated3())]
    {
        let path = args.dir.join(name);
        std::fs::write(&path, instance.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
        written.push(path.display().to_string());
    }
    emit(&MakeInstanceReport { command: "make-instance", written }, None)?;
    Ok(ExitCode::SUCCESS)
}

// --- shared plumbing -------------------------------------------------------

/// Resolve the effective seed: the EVERCOMMIT_SEED variable wins over the
/// flag, and a zero seed draws a fresh nonzero one from system entropy.
fn resolve_seed(flag: u64) -> Result<u64> {
    let mut seed = match std::env::var("EVERCOMMIT_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .with_context(|| format!("EVERCOMMIT_SEED must be a 64-bit integer, got '{text}'"))?,
        Err(_) => flag,
    };
    while seed == 0 {
        seed = rand::rng().random();
    }
    Ok(seed)
}

/// Size the global worker pool. Zero threads means "rayon's default".
fn configure_jobs(jobs: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .context("configuring the worker pool")
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    Instance::from_json(&text)
        .with_context(|| format!("parsing instance file {}", path.display()))
}

fn run_params(pads: &PadArgs) -> Result<RunParams> {
    let base = RunParams::default();
    let ske = SkeParams::new(
        1,
        pads.mu.unwrap_or(base.pad_commit.ske.mu),
        pads.mu_comp.unwrap_or(base.pad_commit.ske.mu_comp),
        pads.threshold.unwrap_or(base.pad_commit.ske.cert_threshold),
    )?;
    let commit = CommitParams::new(
        pads.s.unwrap_or(base.pad_commit.commit.s),
        pads.t.unwrap_or(base.pad_commit.commit.t),
    )?;
    Ok(RunParams::new(CcdParams::new(ske, commit)?)?)
}

fn kind_name(kind: InstanceKind) -> &'static str {
    match kind {
        InstanceKind::Yes => "yes",
        InstanceKind::No => "no",
    }
}

/// Print the report to stdout and, if requested, write the same bytes to a
/// file. One serialization feeds both so they cannot drift.
fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok(())
}

//! `gsar` — score partitions, normalize judge output, run the evaluation
//! pipeline, and exercise the bounded replanning loop from the shell.
//!
//! Exit codes: 0 success, 1 operational error, 2 usage error, 3 audit
//! failure (the run produced traces, but they did not survive the
//! integrity audit and no summary was written).

use std::collections::HashMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gsar::corpus::{load_dataset, read_dataset, synthetic, DEFAULT_DIMENSION};
use gsar::domain::{EvidenceType, GsarConfig, Partition, PartitionClass};
use gsar::harness::{
    build_summary, fingerprint_audit, read_traces, run_traces, write_traces, AuditReport,
    CollapseTarget, PipelineOptions, RunTrace, SummaryReport, TraceAtom, Variant, VariantMetrics,
    CONTAMINATION_MARKER,
};
use gsar::judge::{
    parse_judge_output, HttpJudge, RecordJudge, ReplayJudge, RuleBasedJudge, ScriptedJudge,
    DEFAULT_KAPPA,
};
use gsar::replan::{run_investigation, SimulationHooks};
use gsar::scoring::score_and_decide;

#[derive(Parser)]
#[command(
    name = "gsar",
    version,
    about = "Grounding-scored action review toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a claim partition and print the breakdown and decision.
    Score(ScoreArgs),
    /// Normalize raw judge output into a verdict (strict, then lenient,
    /// then fallback) and print it with the parse stage.
    Judge(JudgeArgs),
    /// Run the evaluation pipeline over a JSONL dataset.
    Run(RunArgs),
    /// Drive one bounded investigation against a scripted judge.
    Loop(LoopArgs),
    /// Audit a previously written trace file.
    Audit(AuditArgs),
    /// Generate a synthetic dataset with known routing structure.
    Synth(SynthArgs),
}

#[derive(clap::Args)]
struct ScoreArgs {
    /// Partition JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Config overrides (flat JSON); GSAR_CONFIG applies when omitted.
    #[arg(long, env = "GSAR_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct JudgeArgs {
    /// Raw judge output; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSONL dataset of claim records.
    #[arg(long)]
    dataset: PathBuf,
    /// Evaluate a deterministic sample of this many records (whole file
    /// when omitted).
    #[arg(long)]
    n: Option<usize>,
    /// Passages retrieved per record.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Seed for sampling and the bootstrap.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Judge backend: `rule`, `replay:<path>`, or an http(s) endpoint URL.
    #[arg(long, default_value = "rule")]
    judge: String,
    /// Comma-separated variant list (all seven when omitted).
    #[arg(long, value_delimiter = ',')]
    variants: Option<Vec<String>>,
    /// Config overrides (flat JSON); GSAR_CONFIG applies when omitted.
    #[arg(long, env = "GSAR_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory for traces.jsonl, audit.json, summary.json.
    #[arg(long, default_value = "gsar-out")]
    out: PathBuf,
    /// Similarity threshold for the rule judge's complementary routing.
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    /// Embedding dimension.
    #[arg(long, default_value_t = DEFAULT_DIMENSION)]
    dim: usize,
    /// Corrupt the finished traces before the audit (diagnostics only:
    /// proves the audit actually fails runs).
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(clap::Args)]
struct LoopArgs {
    /// JSONL file with one judge verdict per line, served in order.
    #[arg(long)]
    script: PathBuf,
    /// Signal identifier for the simulated investigation.
    #[arg(long, default_value = "demo-signal")]
    signal: String,
    /// Config overrides (flat JSON); GSAR_CONFIG applies when omitted.
    #[arg(long, env = "GSAR_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct AuditArgs {
    /// traces.jsonl produced by `gsar run`.
    #[arg(long)]
    traces: PathBuf,
    /// Where to write audit.json (stdout only when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Number of records to generate.
    #[arg(long, default_value_t = 25)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output JSONL path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fault {
    /// Overwrite collapsing variants' partitions with the default
    /// variant's, simulating an ablation that never ran.
    FrozenVariants,
    /// Prepend a scaffolding-marker atom to the first trace.
    MarkerAtoms,
}

fn main() {
    match run(Cli::parse()) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Score(args) => cmd_score(args),
        Command::Judge(args) => cmd_judge(args),
        Command::Run(args) => cmd_run(args),
        Command::Loop(args) => cmd_loop(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Synth(args) => cmd_synth(args),
    }
}

fn cmd_score(args: ScoreArgs) -> Result<i32> {
    let config = GsarConfig::load(args.config.as_deref())?;
    let text = read_input(args.input.as_deref())?;
    let partition: Partition =
        serde_json::from_str(&text).context("input is not a claim partition")?;
    let (breakdown, decision) = score_and_decide(&partition, &config)?;
    let out = serde_json::json!({
        "breakdown": breakdown,
        "decision": decision,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn cmd_judge(args: JudgeArgs) -> Result<i32> {
    let text = read_input(args.input.as_deref())?;
    let judgement = parse_judge_output(&text);
    let out = serde_json::json!({
        "parse_stage": judgement.parse_stage.as_u8(),
        "verdict": judgement.verdict,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let config = GsarConfig::load(args.config.as_deref())?;
    let records = match args.n {
        Some(n) => load_dataset(&args.dataset, n, args.seed)?,
        None => read_dataset(&args.dataset)?,
    };
    let variants = parse_variants(args.variants.as_deref())?;
    let judge = build_judge(&args.judge, args.kappa, &config)?;
    let options = PipelineOptions {
        variants,
        k: args.k,
        seed: args.seed,
        dimension: args.dim,
        collapse: CollapseTarget::default(),
        config,
    };

    let mut traces = run_traces(&records, judge.as_ref(), &options)?;
    if let Some(fault) = args.inject_fault {
        eprintln!("warning: fault injection active ({fault:?}); this run is a diagnostic");
        inject_fault(&mut traces, fault);
    }
    let audit = fingerprint_audit(&traces);

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    write_traces(&args.out.join("traces.jsonl"), &traces)?;
    write_json(&args.out.join("audit.json"), &audit)?;

    if !audit.passed {
        report_audit_failure(&audit);
        eprintln!(
            "traces and audit report written to {}; no summary was produced",
            args.out.display()
        );
        return Ok(3);
    }

    let mut summary = build_summary(&traces, &options, judge.backend_id(), audit)?;
    summary.meta.generated_at = Some(chrono::Utc::now().to_rfc3339());
    write_json(&args.out.join("summary.json"), &summary)?;

    print_summary_table(&summary);
    println!(
        "\n{} records × {} variants → {}",
        summary.meta.records,
        summary.meta.variants.len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_loop(args: LoopArgs) -> Result<i32> {
    let config = GsarConfig::load(args.config.as_deref())?;
    let judge = ScriptedJudge::from_path(&args.script)?;
    let mut hooks = SimulationHooks::default();
    let result = run_investigation(&args.signal, &mut hooks, &judge, &config);

    for (i, step) in result.verdict_history.iter().enumerate() {
        println!(
            "step {:>2}: score {:.4} → {}{}",
            i + 1,
            step.score,
            step.decision,
            if step.verdict.is_abstain() {
                " (judge abstained)"
            } else {
                ""
            }
        );
    }
    println!(
        "finished: replans {}, regenerations {}, degraded {}",
        result.replans_used, result.regenerations_used, result.degraded
    );
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(0)
}

fn cmd_audit(args: AuditArgs) -> Result<i32> {
    let traces = read_traces(&args.traces)?;
    let audit = fingerprint_audit(&traces);
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        write_json(&out.join("audit.json"), &audit)?;
    }
    for check in &audit.checks {
        println!(
            "{} {}: {}",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    if audit.passed {
        Ok(0)
    } else {
        report_audit_failure(&audit);
        Ok(3)
    }
}

fn cmd_synth(args: SynthArgs) -> Result<i32> {
    let records = synthetic::generate(args.n, args.seed);
    match &args.out {
        Some(path) => synthetic::write_jsonl(path, &records)?,
        None => print!("{}", synthetic::to_jsonl(&records)),
    }
    Ok(0)
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(path) => {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            Ok(text)
        }
    }
}

fn parse_variants(names: Option<&[String]>) -> Result<Vec<Variant>> {
    match names {
        None => Ok(Variant::ALL.to_vec()),
        Some(names) => names
            .iter()
            .map(|name| Variant::parse(name.trim()).map_err(Into::into))
            .collect(),
    }
}

fn build_judge(spec: &str, kappa: f64, config: &GsarConfig) -> Result<Box<dyn RecordJudge>> {
    if spec == "rule" {
        return Ok(Box::new(RuleBasedJudge::with_config(kappa, config.clone())));
    }
    if let Some(path) = spec.strip_prefix("replay:") {
        let judge = ReplayJudge::from_path(Path::new(path))?;
        for warning in judge.duplicate_warnings() {
            eprintln!("warning: {warning}");
        }
        return Ok(Box::new(judge));
    }
    if spec.starts_with("http://") || spec.starts_with("https://") {
        return Ok(Box::new(HttpJudge::new(spec)?));
    }
    bail!("unknown judge spec {spec:?}; expected rule, replay:<path>, or an http(s) URL");
}

fn inject_fault(traces: &mut [RunTrace], fault: Fault) {
    match fault {
        Fault::FrozenVariants => {
            let defaults: HashMap<String, ([usize; 4], Vec<TraceAtom>)> = traces
                .iter()
                .filter(|t| t.variant == Variant::Default)
                .map(|t| (t.record_id.clone(), (t.partition_counts, t.atoms.clone())))
                .collect();
            for trace in traces.iter_mut() {
                if trace.variant.collapses_complementary() {
                    if let Some((counts, atoms)) = defaults.get(&trace.record_id) {
                        trace.partition_counts = *counts;
                        trace.atoms = atoms.clone();
                    }
                }
            }
        }
        Fault::MarkerAtoms => {
            if let Some(trace) = traces.first_mut() {
                trace.atoms.insert(
                    0,
                    TraceAtom {
                        text: format!("{CONTAMINATION_MARKER} injected diagnostic atom"),
                        class: PartitionClass::Complementary,
                        evidence_type: EvidenceType::ComplementaryFinding,
                    },
                );
                trace.partition_counts[3] += 1;
            }
        }
    }
}

fn report_audit_failure(audit: &AuditReport) {
    eprintln!("audit failed:");
    for check in audit.failures() {
        eprintln!("  {}: {}", check.name, check.detail);
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_summary_table(summary: &SummaryReport) {
    println!(
        "{:<24} {:>8} {:>11} {:>7} {:>8} {:>7} {:>7}",
        "variant", "proceed", "regenerate", "replan", "mean S", "contra", "compl"
    );
    for m in &summary.variants {
        println!(
            "{:<24} {:>8} {:>11} {:>7} {:>8.3} {:>7} {:>7}",
            m.variant.label(),
            m.proceed,
            m.regenerate,
            m.replan,
            m.mean_score,
            fmt_rate(m.contradiction_detection_rate),
            fmt_rate(m.complementary_recognition_rate),
        );
    }
    if let Some(mode) = summary.variants.iter().find_map(complementary_mode_label) {
        println!("compl rate mode: {mode}");
    }
}

fn complementary_mode_label(m: &VariantMetrics) -> Option<&'static str> {
    use gsar::harness::ComplementaryMode;
    m.complementary_mode.map(|mode| match mode {
        ComplementaryMode::GoldRelative => "gold-relative",
        ComplementaryMode::JudgeRelative => "judge-relative",
    })
}

fn fmt_rate(rate: Option<f64>) -> String {
    match rate {
        Some(r) => format!("{r:.3}"),
        None => "-".into(),
    }
}

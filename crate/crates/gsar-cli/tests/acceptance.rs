//! Acceptance suite. One test per criterion; each prints a single
//! PASS/FAIL line (run with `--nocapture` to see them inline).
//!
//! The criteria pin down the numeric contract of the whole stack: the
//! golden worked example, the scoring order relations at scale, the loop
//! budget semantics, parser totality, bootstrap determinism, the trace
//! audit's veto power, and end-to-end reproducibility of the CLI.

use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gsar::corpus::synthetic;
use gsar::domain::{
    Claim, Decision, EvidenceType, GsarConfig, JudgeVerdict, Partition, PartitionClass, Thresholds,
    WeightMap,
};
use gsar::harness::{
    paired_bootstrap_ci, run_pipeline, PipelineOptions, Variant, DEFAULT_BOOTSTRAP_RESAMPLES,
};
use gsar::judge::{parse_judge_output, ScriptedJudge};
use gsar::replan::{run_investigation, SimulationHooks};
use gsar::scoring::{decide, gsar_score, score_and_decide};

/// Prints exactly one PASS/FAIL line per criterion, then propagates any
/// failure to the test harness.
fn criterion<F>(number: usize, name: &str, body: F)
where
    F: FnOnce() -> String + UnwindSafe,
{
    match catch_unwind(body) {
        Ok(detail) => println!("PASS [{number}/9] {name}: {detail}"),
        Err(cause) => {
            println!("FAIL [{number}/9] {name}");
            std::panic::resume_unwind(cause);
        }
    }
}

fn claim(text: &str, ty: EvidenceType) -> Claim {
    Claim::new(text, ty, vec![]).unwrap()
}

/// The shipped worked example: two grounded observations, one ungrounded
/// inference, one contradicted inference, one complementary finding.
fn worked_example() -> Partition {
    Partition::new(
        vec![
            claim(
                "resource usage dropped after the rollout",
                EvidenceType::ToolMatch,
            ),
            claim("the rollout finished at 14:02", EvidenceType::SpecificData),
        ],
        vec![claim(
            "users saw faster page loads",
            EvidenceType::Inference,
        )],
        vec![claim("error rates stayed flat", EvidenceType::Inference)],
        vec![claim(
            "a parallel capacity change also landed",
            EvidenceType::ComplementaryFinding,
        )],
    )
    .unwrap()
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_1_worked_example_golden() {
    criterion(1, "worked-example golden score", || {
        let partition = worked_example();
        let config = GsarConfig::default();

        // Warm up once, then take the fastest of a few runs so scheduler
        // noise cannot fail a sub-millisecond budget.
        let _ = score_and_decide(&partition, &config).unwrap();
        let mut best = Duration::MAX;
        let mut result = None;
        for _ in 0..10 {
            let start = Instant::now();
            let r = score_and_decide(&partition, &config).unwrap();
            best = best.min(start.elapsed());
            result = Some(r);
        }
        let (breakdown, decision) = result.unwrap();

        let expected = 2.80 / 3.70;
        assert!(
            (breakdown.score - expected).abs() < 1e-9,
            "S = {} but expected {expected}",
            breakdown.score
        );
        assert!((breakdown.numerator - 2.80).abs() < 1e-12);
        assert!((breakdown.denominator - 3.70).abs() < 1e-12);
        assert_eq!(decision, Decision::Regenerate);
        assert!(best < Duration::from_millis(1), "scoring took {best:?}");
        format!(
            "S = {:.9} (2.80/3.70), decision = {decision}, {best:?}",
            breakdown.score
        )
    });
}

// --- criterion 2 -----------------------------------------------------------

const CASES_PER_PROPERTY: usize = 10_000;

struct Sampler {
    rng: ChaCha8Rng,
    counter: usize,
    type_pool: Vec<EvidenceType>,
}

impl Sampler {
    fn new(seed: u64) -> Sampler {
        let mut type_pool: Vec<EvidenceType> = EvidenceType::known().collect();
        type_pool.push(EvidenceType::from_label("exotic_probe"));
        type_pool.push(EvidenceType::from_label("vendor_feed"));
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            counter: 0,
            type_pool,
        }
    }

    fn evidence_type(&mut self) -> EvidenceType {
        let idx = self.rng.gen_range(0..self.type_pool.len());
        self.type_pool[idx].clone()
    }

    fn claims(&mut self, max: usize) -> Vec<Claim> {
        let n = self.rng.gen_range(0..=max);
        (0..n)
            .map(|_| {
                self.counter += 1;
                let ty = self.evidence_type();
                claim(&format!("sampled claim {}", self.counter), ty)
            })
            .collect()
    }

    fn partition(&mut self, max_per_class: usize) -> Partition {
        Partition::new(
            self.claims(max_per_class),
            self.claims(max_per_class),
            self.claims(max_per_class),
            self.claims(max_per_class),
        )
        .unwrap()
    }

    fn config(&mut self) -> GsarConfig {
        let entries = self
            .type_pool
            .iter()
            .map(|ty| (ty.clone(), self.rng.gen_range(0.0..=1.0)))
            .collect();
        let weights = WeightMap::new(entries, self.rng.gen_range(0.0..=1.0)).unwrap();
        GsarConfig::new(
            weights,
            self.rng.gen_range(0.0..=1.0),
            Thresholds::default(),
            2,
            0.5,
        )
        .unwrap()
    }
}

fn rebuild_with(partition: &Partition, class: PartitionClass, claims: Vec<Claim>) -> Partition {
    let pick = |c: PartitionClass| {
        if c == class {
            claims.clone()
        } else {
            partition.class(c).to_vec()
        }
    };
    Partition::new(
        pick(PartitionClass::Grounded),
        pick(PartitionClass::Ungrounded),
        pick(PartitionClass::Contradicted),
        pick(PartitionClass::Complementary),
    )
    .unwrap()
}

#[test]
fn criterion_2_property_suite() {
    criterion(2, "scoring property suite (P1-P6)", || {
        let start = Instant::now();

        // P1: boundedness, and the decision function accepts every score
        // the scorer can emit.
        let mut sampler = Sampler::new(101);
        for _ in 0..CASES_PER_PROPERTY {
            let partition = sampler.partition(8);
            let config = sampler.config();
            let s = gsar_score(&partition, &config).score;
            assert!((0.0..=1.0).contains(&s), "P1 violated: {s}");
            decide(s, config.thresholds()).unwrap();
        }

        // P2: moving a claim from ungrounded to grounded never lowers S,
        // strictly raises it when the claim carries weight.
        let mut sampler = Sampler::new(102);
        let mut done = 0;
        while done < CASES_PER_PROPERTY {
            let mut partition = sampler.partition(8);
            if partition.ungrounded().is_empty() {
                partition = rebuild_with(
                    &partition,
                    PartitionClass::Ungrounded,
                    vec![claim("forced ungrounded", sampler.evidence_type())],
                );
            }
            let config = sampler.config();
            let idx = sampler.rng.gen_range(0..partition.ungrounded().len());
            let moved_claim = partition.ungrounded()[idx].clone();
            let w = config.weights().weight(moved_claim.evidence_type());

            let mut ungrounded = partition.ungrounded().to_vec();
            ungrounded.remove(idx);
            let mut grounded = partition.grounded().to_vec();
            grounded.push(moved_claim);
            let after_partition = Partition::new(
                grounded,
                ungrounded,
                partition.contradicted().to_vec(),
                partition.complementary().to_vec(),
            )
            .unwrap();

            let before = gsar_score(&partition, &config).score;
            let after = gsar_score(&after_partition, &config).score;
            assert!(after >= before - 1e-12, "P2 violated: {before} -> {after}");
            if w > 1e-9 {
                assert!(after > before, "P2 strictness violated at w = {w}");
            }
            done += 1;
        }

        // P3: appending a contradicted claim never raises S; strictly
        // lowers it when the penalized weight is positive and the
        // numerator is non-empty.
        let mut sampler = Sampler::new(103);
        for _ in 0..CASES_PER_PROPERTY {
            let partition = sampler.partition(8);
            let config = sampler.config();
            let extra = claim("appended contradiction", sampler.evidence_type());
            let w = config.weights().weight(extra.evidence_type());
            let mut contradicted = partition.contradicted().to_vec();
            contradicted.push(extra);
            let appended = rebuild_with(&partition, PartitionClass::Contradicted, contradicted);

            let before = gsar_score(&partition, &config);
            let after = gsar_score(&appended, &config).score;
            assert!(after <= before.score + 1e-12, "P3 violated");
            if config.rho() * w > 1e-9 && before.numerator > 1e-9 {
                assert!(after < before.score, "P3 strictness violated");
            }
        }

        // P4: appending a complementary claim never lowers S; strictly
        // raises it when the claim carries weight and S was below 1.
        let mut sampler = Sampler::new(104);
        for _ in 0..CASES_PER_PROPERTY {
            let partition = sampler.partition(8);
            let config = sampler.config();
            let extra = claim("appended complementary finding", sampler.evidence_type());
            let w = config.weights().weight(extra.evidence_type());
            let mut complementary = partition.complementary().to_vec();
            complementary.push(extra);
            let appended = rebuild_with(&partition, PartitionClass::Complementary, complementary);

            let before = gsar_score(&partition, &config);
            let after = gsar_score(&appended, &config).score;
            assert!(after >= before.score - 1e-12, "P4 violated");
            let gap = before.denominator - before.numerator;
            if w > 1e-9 && (before.denominator == 0.0 || gap > 1e-9) {
                assert!(after > before.score, "P4 strictness violated");
            }
        }

        // P5: deleting every contradicted claim inflates S — the score
        // must reward the deletion, which is exactly why partitions are
        // judged before anyone can prune them.
        let mut sampler = Sampler::new(105);
        for _ in 0..CASES_PER_PROPERTY {
            let partition = sampler.partition(8);
            let config = sampler.config();
            let scrubbed = rebuild_with(&partition, PartitionClass::Contradicted, vec![]);
            let before = gsar_score(&partition, &config);
            let after = gsar_score(&scrubbed, &config).score;
            assert!(after >= before.score - 1e-12, "P5 violated");
            if config.rho() * before.w_contradicted > 1e-9 && before.numerator > 1e-9 {
                assert!(after > before.score, "P5 strictness violated");
            }
        }

        // P6: demoting a grounded tool_match claim to inference moves S by
        // exactly delta*(D-N)/(D*(D+delta)), and strictly downward when
        // inference is the lighter type and the score has room to fall.
        let mut sampler = Sampler::new(106);
        let mut done = 0;
        while done < CASES_PER_PROPERTY {
            let partition = sampler.partition(8);
            let config = sampler.config();
            let pivot = claim("pivot observation", EvidenceType::ToolMatch);
            let mut grounded = partition.grounded().to_vec();
            grounded.push(pivot.clone());
            let before_partition = rebuild_with(&partition, PartitionClass::Grounded, grounded);

            let mut demoted = before_partition.grounded().to_vec();
            let last = demoted.len() - 1;
            demoted[last] = pivot.with_evidence_type(EvidenceType::Inference);
            let after_partition =
                rebuild_with(&before_partition, PartitionClass::Grounded, demoted);

            let before = gsar_score(&before_partition, &config);
            let delta_w = config.weights().weight(&EvidenceType::Inference)
                - config.weights().weight(&EvidenceType::ToolMatch);
            let (n, d) = (before.numerator, before.denominator);
            if d < 1e-6 || d + delta_w < 1e-6 {
                continue; // degenerate all-zero-weight draw; resample
            }
            let after = gsar_score(&after_partition, &config).score;
            let predicted = delta_w * (d - n) / (d * (d + delta_w));
            assert!(
                ((after - before.score) - predicted).abs() < 1e-9,
                "P6 closed form violated: observed {} predicted {predicted}",
                after - before.score
            );
            if delta_w < -1e-9 && d - n > 1e-9 {
                assert!(after < before.score, "P6 strict decrease violated");
            }
            done += 1;
        }

        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(10),
            "property suite took {elapsed:?}"
        );
        format!("6 properties x {CASES_PER_PROPERTY} cases, 0 violations, {elapsed:?}")
    });
}

// --- criterion 3 -----------------------------------------------------------

#[test]
fn criterion_3_empty_partition_neutral() {
    criterion(3, "empty partition scores neutral and replans", || {
        let config = GsarConfig::default();
        let (breakdown, decision) = score_and_decide(&Partition::empty(), &config).unwrap();
        assert_eq!(breakdown.score, 0.5);
        assert_eq!(decision, Decision::Replan);
        format!("S = {}, decision = {decision}", breakdown.score)
    });
}

// --- criterion 4 -----------------------------------------------------------

#[test]
fn criterion_4_structural_ablation_relations() {
    criterion(4, "ablation relations on a 200-record corpus", || {
        let start = Instant::now();
        let records = synthetic::generate(200, 42);
        let judge = gsar::judge::RuleBasedJudge::default();
        let out = run_pipeline(&records, &judge, &PipelineOptions::default()).unwrap();
        let summary = out.summary.expect("audit passes on an honest run");

        let traces_of = |v: Variant| -> Vec<&gsar::harness::RunTrace> {
            out.traces.iter().filter(|t| t.variant == v).collect()
        };
        let metrics_of = |v: Variant| summary.variants.iter().find(|m| m.variant == v).unwrap();
        let default_traces = traces_of(Variant::Default);
        let default_metrics = metrics_of(Variant::Default);

        // (a) rho_zero dominates default per record, in the mean, and
        // without touching the contradiction catch-rate.
        let rho_traces = traces_of(Variant::RhoZero);
        for (r, d) in rho_traces.iter().zip(&default_traces) {
            assert!(
                r.score >= d.score,
                "rho_zero {} < default {}",
                r.score,
                d.score
            );
        }
        let rho_delta = summary
            .deltas
            .iter()
            .find(|d| d.variant == Variant::RhoZero)
            .unwrap();
        assert!(rho_delta.mean_score_delta.point >= 0.0);
        assert_eq!(
            metrics_of(Variant::RhoZero).contradiction_detection_rate,
            default_metrics.contradiction_detection_rate,
        );

        // (b) two_tier preserves proceeds and folds the regenerate band
        // into replan.
        let two = metrics_of(Variant::TwoTier);
        assert_eq!(two.proceed, default_metrics.proceed);
        assert_eq!(
            two.replan,
            default_metrics.replan + default_metrics.regenerate
        );
        assert_eq!(two.regenerate, 0);
        // The fold itself, demonstrated on a partition inside the band.
        let config = GsarConfig::default();
        let banded = worked_example();
        let (_, _, three_tier) = gsar::harness::evaluate_variant(
            Variant::Default,
            &banded,
            &config,
            gsar::harness::CollapseTarget::default(),
        );
        let (_, _, folded) = gsar::harness::evaluate_variant(
            Variant::TwoTier,
            &banded,
            &config,
            gsar::harness::CollapseTarget::default(),
        );
        assert_eq!(three_tier, Decision::Regenerate);
        assert_eq!(folded, Decision::Replan);

        // (c) removing the complementary class can only lose proceeds —
        // and the comparison is non-vacuous: the corpus produces
        // complementary routings.
        assert!(default_traces.iter().any(|t| t.partition_counts[3] > 0));
        assert!(metrics_of(Variant::NoComplementary).proceed <= default_metrics.proceed);

        // (d) single-atom records cannot see the weight table.
        for t in &default_traces {
            assert!(t.partition_counts.iter().sum::<usize>() <= 1);
        }
        let uniform_traces = traces_of(Variant::UniformWeights);
        for (u, d) in uniform_traces.iter().zip(&default_traces) {
            assert!(
                u.score == d.score,
                "uniform {} != default {} on a single-atom record",
                u.score,
                d.score
            );
        }

        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(10),
            "ablation run took {elapsed:?}"
        );
        format!(
            "rho_zero dominates, two_tier folds, collapse loses {} proceeds, uniform identical, {elapsed:?}",
            default_metrics.proceed - metrics_of(Variant::NoComplementary).proceed
        )
    });
}

// --- criterion 5 -----------------------------------------------------------

/// The judge-side alphabet for loop testing: a verdict scoring in each
/// decision band, plus an abstention.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Sym {
    ProceedBand,
    RegenerateBand,
    ReplanBand,
    Abstain,
}

const ALPHABET: [Sym; 4] = [
    Sym::ProceedBand,
    Sym::RegenerateBand,
    Sym::ReplanBand,
    Sym::Abstain,
];

fn verdict_for(sym: Sym) -> JudgeVerdict {
    let partition = match sym {
        Sym::ProceedBand => Partition::singleton(
            claim("fully grounded", EvidenceType::ToolMatch),
            PartitionClass::Grounded,
        ),
        Sym::RegenerateBand => worked_example(),
        Sym::ReplanBand => Partition::singleton(
            claim("contradicted", EvidenceType::ToolMatch),
            PartitionClass::Contradicted,
        ),
        Sym::Abstain => return JudgeVerdict::safe_default("scripted abstention"),
    };
    JudgeVerdict::resolved(
        0.5,
        false,
        partition,
        vec![],
        vec![],
        false,
        None,
        "scripted",
    )
    .unwrap()
}

/// Reference prediction of the loop's budget accounting, written straight
/// from the loop's specification and deliberately sharing no code with it.
struct Expected {
    replans: u32,
    regenerations: u32,
    degraded: bool,
    judge_calls: usize,
    final_decision: Decision,
}

fn reference(script: &[Sym], k_max: u32) -> Expected {
    let sym_at = |call: usize| script.get(call).copied().unwrap_or(Sym::Abstain);
    let band = |sym: Sym| match sym {
        Sym::ProceedBand => Decision::Proceed,
        Sym::RegenerateBand => Decision::Regenerate,
        // An abstention carries the neutral 0.5, which sits in the replan
        // band under default thresholds.
        Sym::ReplanBand | Sym::Abstain => Decision::Replan,
    };

    let mut calls = 0usize;
    let mut replans = 0u32;
    let mut regenerations = 0u32;
    let mut just_regenerated = false;
    let mut degraded = false;

    let mut sym = sym_at(calls);
    calls += 1;
    loop {
        if band(sym) == Decision::Proceed {
            break;
        }
        if sym == Sym::Abstain || band(sym) == Decision::Replan || just_regenerated {
            if replans >= k_max {
                degraded = true;
                break;
            }
            replans += 1;
            just_regenerated = false;
        } else {
            regenerations += 1;
            just_regenerated = true;
        }
        sym = sym_at(calls);
        calls += 1;
    }

    Expected {
        replans,
        regenerations,
        degraded,
        judge_calls: calls,
        final_decision: band(sym),
    }
}

#[test]
fn criterion_5_loop_bounds_exhaustive() {
    criterion(5, "loop budget semantics, exhaustive", || {
        let mut cases = 0usize;
        for len in 0..=6usize {
            let combos = ALPHABET.len().pow(len as u32);
            for combo in 0..combos {
                let mut script = Vec::with_capacity(len);
                let mut rest = combo;
                for _ in 0..len {
                    script.push(ALPHABET[rest % ALPHABET.len()]);
                    rest /= ALPHABET.len();
                }
                for k_max in 0..=2u32 {
                    let config = GsarConfig::default().with_k_max(k_max);
                    let judge =
                        ScriptedJudge::new(script.iter().map(|&s| verdict_for(s)).collect());
                    let mut hooks = SimulationHooks::default();
                    let result = run_investigation("loop-case", &mut hooks, &judge, &config);
                    let expected = reference(&script, k_max);

                    let case = format!("script {script:?}, k_max {k_max}");
                    assert_eq!(result.replans_used, expected.replans, "{case}");
                    assert_eq!(result.regenerations_used, expected.regenerations, "{case}");
                    assert_eq!(result.degraded, expected.degraded, "{case}");
                    assert_eq!(result.verdict_history.len(), expected.judge_calls, "{case}");
                    let last = result.verdict_history.last().unwrap();
                    assert_eq!(last.decision, expected.final_decision, "{case}");

                    // The advertised bounds, independent of the reference.
                    assert!(result.replans_used <= k_max, "{case}");
                    assert!(result.regenerations_used <= k_max + 1, "{case}");
                    assert!(
                        result.verdict_history.len() <= (2 * k_max + 2) as usize,
                        "{case}"
                    );
                    cases += 1;
                }
            }
        }

        // The two headline behaviours, spelled out.
        let config = GsarConfig::default();
        let abstain_then_proceed = ScriptedJudge::new(vec![
            verdict_for(Sym::Abstain),
            verdict_for(Sym::ProceedBand),
        ]);
        let result = run_investigation(
            "abstain",
            &mut SimulationHooks::default(),
            &abstain_then_proceed,
            &config,
        );
        assert_eq!(
            result.replans_used, 1,
            "abstention must consume replan budget"
        );

        let oscillator = ScriptedJudge::new(vec![
            verdict_for(Sym::RegenerateBand),
            verdict_for(Sym::RegenerateBand),
            verdict_for(Sym::ProceedBand),
        ]);
        let result = run_investigation(
            "oscillate",
            &mut SimulationHooks::default(),
            &oscillator,
            &config,
        );
        assert_eq!(result.regenerations_used, 1);
        assert_eq!(
            result.replans_used, 1,
            "second regenerate in a row must escalate"
        );

        format!("{cases} scripted runs match the reference simulator")
    });
}

// --- criterion 6 -----------------------------------------------------------

#[test]
fn criterion_6_parser_fuzz() {
    criterion(6, "judge-output parser totality under fuzz", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
        let runs = 100_000;
        for _ in 0..runs {
            let len = rng.gen_range(0..64usize);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let input = String::from_utf8_lossy(&bytes);
            let judgement = parse_judge_output(&input);
            assert_eq!(judgement.parse_stage.as_u8(), 3, "input {input:?}");
            let verdict = &judgement.verdict;
            assert_eq!(verdict.judge_score(), 0.5);
            assert!(verdict.is_abstain());
            assert!(verdict.partition().is_empty());
        }
        format!("{runs} random byte strings, all at stage 3 with neutral abstain")
    });
}

// --- criterion 7 -----------------------------------------------------------

#[test]
fn criterion_7_bootstrap_determinism() {
    criterion(7, "bootstrap degeneracy and determinism", || {
        assert_eq!(DEFAULT_BOOTSTRAP_RESAMPLES, 1000);

        let constant = vec![0.125; 80];
        let ci = paired_bootstrap_ci(&constant, DEFAULT_BOOTSTRAP_RESAMPLES, 9).unwrap();
        assert_eq!(ci.point, 0.125);
        assert_eq!(ci.lower, 0.125);
        assert_eq!(ci.upper, 0.125);

        let deltas: Vec<f64> = (0..120)
            .map(|i| ((i * 37) % 17) as f64 / 16.0 - 0.5)
            .collect();
        let a = paired_bootstrap_ci(&deltas, DEFAULT_BOOTSTRAP_RESAMPLES, 31).unwrap();
        let b = paired_bootstrap_ci(&deltas, DEFAULT_BOOTSTRAP_RESAMPLES, 31).unwrap();
        assert_eq!(a.point.to_bits(), b.point.to_bits());
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        assert_eq!(a.upper.to_bits(), b.upper.to_bits());

        let single = paired_bootstrap_ci(&deltas, 1, 31).unwrap();
        assert_eq!(single.lower, single.upper);

        format!(
            "zero-width on constants, bit-identical across runs, B = {DEFAULT_BOOTSTRAP_RESAMPLES}"
        )
    });
}

// --- criteria 8 and 9: the CLI end to end -----------------------------------

fn gsar_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsar"))
}

fn synth_dataset(dir: &Path, n: usize) -> std::path::PathBuf {
    let dataset = dir.join("dataset.jsonl");
    let output = gsar_bin()
        .args(["synth", "--n", &n.to_string(), "--seed", "5", "--out"])
        .arg(&dataset)
        .output()
        .unwrap();
    assert!(output.status.success());
    dataset
}

#[test]
fn criterion_8_audit_refuses_corrupted_runs() {
    criterion(8, "audit veto on a corrupted run", || {
        let dir = tempfile::tempdir().unwrap();
        let dataset = synth_dataset(dir.path(), 40);
        let out_dir = dir.path().join("corrupted");

        let output = gsar_bin()
            .args(["run", "--dataset"])
            .arg(&dataset)
            .args(["--out"])
            .arg(&out_dir)
            .args(["--inject-fault", "frozen-variants"])
            .output()
            .unwrap();

        assert_eq!(
            output.status.code(),
            Some(3),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(out_dir.join("traces.jsonl").exists());
        assert!(out_dir.join("audit.json").exists());
        assert!(
            !out_dir.join("summary.json").exists(),
            "a corrupted run must not produce a summary"
        );
        let audit: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("audit.json")).unwrap())
                .unwrap();
        assert_eq!(audit["passed"], serde_json::Value::Bool(false));
        "exit 3, traces + audit written, summary withheld".to_string()
    });
}

#[test]
fn criterion_9_run_determinism() {
    criterion(9, "byte-identical traces across runs", || {
        let dir = tempfile::tempdir().unwrap();
        let dataset = synth_dataset(dir.path(), 50);

        let mut trace_bytes = Vec::new();
        for name in ["first", "second"] {
            let out_dir = dir.path().join(name);
            let output = gsar_bin()
                .args(["run", "--dataset"])
                .arg(&dataset)
                .args(["--seed", "42", "--out"])
                .arg(&out_dir)
                .output()
                .unwrap();
            assert!(output.status.success());
            trace_bytes.push(std::fs::read(out_dir.join("traces.jsonl")).unwrap());
            assert!(out_dir.join("summary.json").exists());
        }
        assert_eq!(
            trace_bytes[0], trace_bytes[1],
            "traces.jsonl differs between runs"
        );
        format!("2 runs, {} identical bytes", trace_bytes[0].len())
    });
}

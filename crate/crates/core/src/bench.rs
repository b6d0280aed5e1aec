//! Experiment harness: task extraction, justification-pattern mining,
//! condensation runs and forgetting-based method comparisons, with results
//! written as CSV.
//!
//! Rows are computed through [`crate::par`] and always returned in input
//! order, so a run with timing disabled is byte-for-byte reproducible.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elh::{atomic_cis_of, saturate, FragmentError};
use crate::fbp::{self, FbpError, FbpMethod, FbpTask};
use crate::forget::DEFAULT_TIMEOUT;
use crate::justify::{one_justification, ElOracle, EntailmentOracle, JustifyError};
use crate::par::{self, Execution};
use crate::pattern::{canonical_pattern, CanonicalPattern};
use crate::proof::{evaluate_measure, extract_optimal_proof, signature_coverage, Measure};
use crate::syntax::{Axiom, ConceptExpr, HasSignature, Ontology, Signature};
use crate::tableau::{ReasonerError, TableauConfig};

pub const CSV_HEADER: [&str; 10] = [
    "task_id",
    "method",
    "status",
    "original_size",
    "condensed_size",
    "size_ratio",
    "depth",
    "weighted_size",
    "coverage_pct",
    "elapsed_ms",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTask {
    pub id: String,
    pub ontology_ref: String,
    pub goal: Axiom,
    pub signature_ref: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Timeout,
    Failed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Timeout => "timeout",
            RowStatus::Failed => "failed",
        }
    }
}

/// One CSV line. Columns that do not apply to a method are left empty.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub task_id: String,
    pub method: String,
    pub status: RowStatus,
    pub original_size: u64,
    pub condensed_size: Option<u64>,
    pub size_ratio: Option<f64>,
    pub depth: u64,
    pub weighted_size: u64,
    pub coverage_pct: Option<f64>,
    pub elapsed_ms: u64,
}

impl ResultRow {
    fn empty(task_id: &str, method: &str, status: RowStatus, elapsed_ms: u64) -> Self {
        ResultRow {
            task_id: task_id.to_string(),
            method: method.to_string(),
            status,
            original_size: 0,
            condensed_size: None,
            size_ratio: None,
            depth: 0,
            weighted_size: 0,
            coverage_pct: None,
            elapsed_ms,
        }
    }

    pub fn record(&self) -> [String; 10] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.task_id.clone(),
            self.method.clone(),
            self.status.as_str().to_string(),
            self.original_size.to_string(),
            opt(self.condensed_size.map(|v| v.to_string())),
            opt(self.size_ratio.map(|v| format!("{v:.4}"))),
            self.depth.to_string(),
            self.weighted_size.to_string(),
            opt(self.coverage_pct.map(|v| format!("{v:.2}"))),
            self.elapsed_ms.to_string(),
        ]
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[ResultRow]) -> csv::Result<()> {
    write_csv(std::fs::File::create(path)?, rows)
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub execution: Execution,
    /// When false every `elapsed_ms` is written as 0.
    pub record_timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { execution: Execution::Auto, record_timing: true }
    }
}

impl BenchConfig {
    fn elapsed(&self, t: Instant) -> u64 {
        if self.record_timing {
            t.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

/// Nontrivial entailed atomic CIs of an ELH ontology, optionally restricted
/// to those whose minimal proof uses at least `min_symbols` names of `s`,
/// then sampled uniformly with a seeded generator. Output keeps the sorted
/// order of the candidates.
pub fn extract_tasks(
    o: &Ontology,
    s: Option<&Signature>,
    min_symbols: usize,
    sample_size: usize,
    seed: u64,
) -> Result<Vec<ProofTask>, FragmentError> {
    let d = saturate(o)?;
    let mut candidates: Vec<Axiom> = atomic_cis_of(&d, o, false);
    if let Some(s) = s {
        candidates.retain(|goal| match extract_optimal_proof(&d, goal, Measure::TreeSize, &Signature::new()) {
            Ok(p) => p.signature().intersection(s).len() >= min_symbols,
            Err(_) => false,
        });
    }
    let picked: Vec<usize> = if candidates.len() <= sample_size {
        (0..candidates.len()).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = rand::seq::index::sample(&mut rng, candidates.len(), sample_size).into_vec();
        v.sort_unstable();
        v
    };
    Ok(picked
        .into_iter()
        .map(|i| ProofTask {
            id: format!("t{i:04}"),
            ontology_ref: o.name().to_string(),
            goal: candidates[i].clone(),
            signature_ref: None,
        })
        .collect())
}

/// Minimal tree proofs with and without `s` as known signature. A task
/// that cannot be proved is reported as a failed row.
pub fn run_condensation(o: &Ontology, tasks: &[ProofTask], s: &Signature, cfg: BenchConfig) -> Vec<ResultRow> {
    const METHOD: &str = "condense";
    let d = match saturate(o) {
        Ok(d) => d,
        Err(_) => return tasks.iter().map(|t| ResultRow::empty(&t.id, METHOD, RowStatus::Failed, 0)).collect(),
    };
    let empty = Signature::new();
    par::map(cfg.execution, tasks, |t| {
        let start = Instant::now();
        let original = extract_optimal_proof(&d, &t.goal, Measure::TreeSize, &empty);
        let condensed = extract_optimal_proof(&d, &t.goal, Measure::TreeSize, s);
        let (Ok(original), Ok(condensed)) = (original, condensed) else {
            return ResultRow::empty(&t.id, METHOD, RowStatus::Failed, cfg.elapsed(start));
        };
        let size = evaluate_measure(&original, Measure::TreeSize);
        let small = evaluate_measure(&condensed, Measure::TreeSize);
        let pct = signature_coverage(&original, s) * 100.0;
        ResultRow {
            task_id: t.id.clone(),
            method: METHOD.to_string(),
            status: RowStatus::Ok,
            original_size: size,
            condensed_size: Some(small),
            size_ratio: Some(small as f64 / size as f64),
            depth: evaluate_measure(&original, Measure::Depth),
            weighted_size: evaluate_measure(&original, Measure::WeightedSize),
            coverage_pct: Some((pct * 100.0).round() / 100.0),
            elapsed_ms: cfg.elapsed(start),
        }
    })
}

#[derive(Clone, Copy, Debug)]
pub struct MiningConfig {
    /// Justification computations per goal when approximating the union
    /// of all justifications.
    pub max_justifications: usize,
    /// Keep only patterns with at least one axiom outside ELH.
    pub non_elh_only: bool,
    pub tableau: TableauConfig,
    pub execution: Execution,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            max_justifications: 16,
            non_elh_only: false,
            tableau: TableauConfig::default(),
            execution: Execution::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinedPattern {
    pub pattern: CanonicalPattern,
    pub frequency: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MiningReport {
    /// Most frequent first, ties by pattern key.
    pub patterns: Vec<MinedPattern>,
    pub tasks: usize,
    pub exhausted: usize,
}

/// Groups the entailed atomic CIs of `o` by the canonical pattern of
/// (goal, union of justifications).
pub fn mine_patterns(o: &Ontology, cfg: MiningConfig) -> MiningReport {
    let oracle = ElOracle(cfg.tableau);
    let goals: Vec<Axiom> = if o.iter().all(Axiom::is_elh) {
        crate::elh::entailed_atomic_cis(o, false).unwrap_or_default()
    } else {
        let names: Vec<_> = o.signature().concepts.into_iter().collect();
        names
            .iter()
            .flat_map(|a| names.iter().filter(move |b| *b != a).map(move |b| (a, b)))
            .map(|(a, b)| Axiom::ci(ConceptExpr::Atomic(a.clone()), ConceptExpr::Atomic(b.clone())))
            .collect()
    };
    let results = par::map(cfg.execution, &goals, |g| -> Result<Option<CanonicalPattern>, ReasonerError> {
        if !oracle.entails(o.axioms(), g)? {
            return Ok(None);
        }
        let u = justification_union(o, g, &oracle, cfg.max_justifications)?;
        Ok(Some(canonical_pattern(g, &u)))
    });

    let mut report = MiningReport::default();
    let mut counts: BTreeMap<CanonicalPattern, usize> = BTreeMap::new();
    for r in results {
        match r {
            Ok(Some(p)) => {
                report.tasks += 1;
                if !cfg.non_elh_only || p.has_non_elh_axiom() {
                    *counts.entry(p).or_default() += 1;
                }
            }
            Ok(None) => {}
            Err(_) => report.exhausted += 1,
        }
    }
    let mut patterns: Vec<MinedPattern> =
        counts.into_iter().map(|(pattern, frequency)| MinedPattern { pattern, frequency }).collect();
    patterns.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.pattern.key().cmp(&b.pattern.key())));
    report.patterns = patterns;
    report
}

/// Union of the justifications found by a breadth-first hitting-set search
/// capped at `bound` justification computations, in ontology order.
pub fn justification_union(
    o: &Ontology,
    goal: &Axiom,
    oracle: &dyn EntailmentOracle,
    bound: usize,
) -> Result<Vec<Axiom>, ReasonerError> {
    let mut found: Vec<Vec<Axiom>> = Vec::new();
    let mut queue: VecDeque<BTreeSet<Axiom>> = VecDeque::from([BTreeSet::new()]);
    let mut seen: HashSet<BTreeSet<Axiom>> = HashSet::new();
    let mut calls = 0;
    // Once the budget is spent the union cannot grow any more.
    while let (true, Some(hit)) = (calls < bound, queue.pop_front()) {
        let reusable = found.iter().find(|j| j.iter().all(|a| !hit.contains(a))).cloned();
        let j = match reusable {
            Some(j) => j,
            None => {
                calls += 1;
                let rest = Ontology::from_axioms("", o.iter().filter(|a| !hit.contains(*a)).cloned());
                match one_justification(&rest, goal, oracle) {
                    Ok(j) => {
                        found.push(j.axioms.clone());
                        j.axioms
                    }
                    Err(JustifyError::NotEntailed) => continue,
                    Err(JustifyError::Reasoner(e)) => return Err(e),
                }
            }
        };
        for a in j {
            let mut next = hit.clone();
            next.insert(a);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let union: BTreeSet<&Axiom> = found.iter().flatten().collect();
    Ok(o.iter().filter(|a| union.contains(a)).cloned().collect())
}

/// A goal together with the axioms it is proved from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FbpInstance {
    pub id: String,
    pub goal: Axiom,
    pub ontology: Ontology,
    pub frequency: usize,
}

impl FbpInstance {
    pub fn from_patterns(patterns: &[MinedPattern]) -> Vec<FbpInstance> {
        patterns
            .iter()
            .enumerate()
            .map(|(i, p)| FbpInstance {
                id: format!("p{i:03}"),
                goal: p.pattern.goal.clone(),
                ontology: Ontology::from_axioms(format!("p{i:03}"), p.pattern.axioms.iter().cloned()),
                frequency: p.frequency,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FbpBenchConfig {
    pub budget: Duration,
    pub per_forget_timeout: Duration,
    pub bench: BenchConfig,
}

impl Default for FbpBenchConfig {
    fn default() -> Self {
        FbpBenchConfig { budget: fbp::DEFAULT_BUDGET, per_forget_timeout: DEFAULT_TIMEOUT, bench: BenchConfig::default() }
    }
}

/// One row per (instance, method), instance-major. Timed-out rows carry
/// size 0.
pub fn run_fbp_comparison(instances: &[FbpInstance], methods: &[FbpMethod], cfg: FbpBenchConfig) -> Vec<ResultRow> {
    let jobs: Vec<(&FbpInstance, FbpMethod)> =
        instances.iter().flat_map(|i| methods.iter().map(move |m| (i, *m))).collect();
    par::map(cfg.bench.execution, &jobs, |(inst, method)| {
        let start = Instant::now();
        let mut task = FbpTask::new(inst.ontology.clone(), inst.goal.clone(), *method);
        task.overall_budget = cfg.budget;
        task.per_forget_timeout = cfg.per_forget_timeout;
        let result = fbp::run(&task);
        let elapsed = cfg.bench.elapsed(start);
        match result {
            Ok((p, _)) => ResultRow {
                task_id: inst.id.clone(),
                method: method.as_str().to_string(),
                status: RowStatus::Ok,
                original_size: evaluate_measure(&p, Measure::TreeSize),
                condensed_size: None,
                size_ratio: None,
                depth: evaluate_measure(&p, Measure::Depth),
                weighted_size: evaluate_measure(&p, Measure::WeightedSize),
                coverage_pct: None,
                elapsed_ms: elapsed,
            },
            Err(FbpError::BudgetExceeded) => ResultRow::empty(&inst.id, method.as_str(), RowStatus::Timeout, elapsed),
            Err(_) => ResultRow::empty(&inst.id, method.as_str(), RowStatus::Failed, elapsed),
        }
    })
}

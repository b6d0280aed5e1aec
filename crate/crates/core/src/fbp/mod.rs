//! Forgetting-based proofs for `O ⊨ A ⊑ B`.
//!
//! All methods start from one justification and repeatedly forget a name,
//! re-justifying the goal in the result. Axioms that appear in a new
//! justification become conclusions of `Forget(x)` steps whose premises are
//! a justification in the previous set.

mod heur;
mod size;
mod symb;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::derivation::InferenceRule;
use crate::forget::{forget, ForgettingResult, DEFAULT_TIMEOUT};
use crate::justify::{one_justification, ElOracle, JustifyError};
use crate::proof::{Proof, ProofTree};
use crate::syntax::{Axiom, ConceptExpr, Ontology, Signature, Symbol};
use crate::tableau::ReasonerError;

pub use heur::heur_proof;
pub use size::size_proof;
pub use symb::symb_proof;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FbpMethod {
    Heur,
    Symb,
    Size,
    SizeWeighted,
}

impl FbpMethod {
    pub const ALL: [FbpMethod; 4] = [FbpMethod::Heur, FbpMethod::Symb, FbpMethod::Size, FbpMethod::SizeWeighted];

    pub fn as_str(&self) -> &'static str {
        match self {
            FbpMethod::Heur => "heur",
            FbpMethod::Symb => "symb",
            FbpMethod::Size => "size",
            FbpMethod::SizeWeighted => "size-weighted",
        }
    }
}

impl fmt::Display for FbpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FbpMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "heur" => Ok(FbpMethod::Heur),
            "symb" => Ok(FbpMethod::Symb),
            "size" => Ok(FbpMethod::Size),
            "size-weighted" => Ok(FbpMethod::SizeWeighted),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

pub const DEFAULT_BUDGET: Duration = Duration::from_millis(300_000);
pub const DEFAULT_SIZE_BOUND: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct FbpTask {
    pub ontology: Ontology,
    pub goal: Axiom,
    pub method: FbpMethod,
    pub per_forget_timeout: Duration,
    pub overall_budget: Duration,
    /// Initial bound of the size-optimizing search.
    pub size_bound: u64,
}

impl FbpTask {
    pub fn new(ontology: Ontology, goal: Axiom, method: FbpMethod) -> Self {
        FbpTask {
            ontology,
            goal,
            method,
            per_forget_timeout: DEFAULT_TIMEOUT,
            overall_budget: DEFAULT_BUDGET,
            size_bound: DEFAULT_SIZE_BOUND,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FbpError {
    #[error("goal must be an atomic concept inclusion")]
    InvalidGoal,
    #[error("goal is not entailed")]
    NotEntailed,
    #[error("overall budget exceeded")]
    BudgetExceeded,
    #[error("no proof within the size bound")]
    NoProofWithinBound,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

impl From<JustifyError> for FbpError {
    fn from(e: JustifyError) -> Self {
        match e {
            JustifyError::NotEntailed => FbpError::NotEntailed,
            JustifyError::Reasoner(r) => FbpError::Reasoner(r),
        }
    }
}

/// One attempted forgetting step; `after` is `None` when the step was
/// skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub forgotten: Symbol,
    pub before: Ontology,
    pub after: Option<Ontology>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FbpStats {
    pub forgetting_calls: usize,
    pub failures: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug)]
pub struct FbpTrace {
    pub steps: Vec<TraceStep>,
    pub final_proof: Proof,
    pub stats: FbpStats,
}

impl FbpTrace {
    /// Names actually eliminated, in order.
    pub fn forgotten(&self) -> Vec<Symbol> {
        self.steps.iter().filter(|s| s.after.is_some()).map(|s| s.forgotten.clone()).collect()
    }

    pub fn forgotten_concepts(&self) -> usize {
        self.forgotten().iter().filter(|s| matches!(s, Symbol::Concept(_))).count()
    }
}

pub fn run(task: &FbpTask) -> Result<(Proof, FbpTrace), FbpError> {
    match task.method {
        FbpMethod::Heur => heur_proof(task),
        FbpMethod::Symb => symb_proof(task),
        FbpMethod::Size | FbpMethod::SizeWeighted => size_proof(task),
    }
}

/// Shared per-task state: deadline, entailment oracle and the forgetting
/// cache keyed by (axiom set, name).
pub(crate) struct Ctx {
    goal: Axiom,
    a: Symbol,
    b: Symbol,
    started: Instant,
    budget: Duration,
    timeout: Duration,
    oracle: ElOracle,
    cache: HashMap<(String, Symbol), Option<Ontology>>,
    justifications: HashMap<(String, Axiom), Vec<Axiom>>,
    stats: FbpStats,
}

impl Ctx {
    pub(crate) fn new(task: &FbpTask) -> Result<Self, FbpError> {
        let (a, b) = task.goal.atomic_parts().ok_or(FbpError::InvalidGoal)?;
        Ok(Ctx {
            goal: task.goal.clone(),
            a: Symbol::Concept(a.clone()),
            b: Symbol::Concept(b.clone()),
            started: Instant::now(),
            budget: task.overall_budget,
            timeout: task.per_forget_timeout,
            oracle: ElOracle::default(),
            cache: HashMap::new(),
            justifications: HashMap::new(),
            stats: FbpStats::default(),
        })
    }

    pub(crate) fn check_budget(&self) -> Result<(), FbpError> {
        if self.budget.is_zero() || self.started.elapsed() >= self.budget {
            Err(FbpError::BudgetExceeded)
        } else {
            Ok(())
        }
    }

    pub(crate) fn is_goal_name(&self, s: &Symbol) -> bool {
        *s == self.a || *s == self.b
    }

    /// Names of `j` other than the goal's two concept names.
    pub(crate) fn candidates(&self, j: &Ontology, concepts_only: bool) -> Vec<Symbol> {
        Signature::of(j)
            .symbols()
            .filter(|s| !self.is_goal_name(s) && (!concepts_only || matches!(s, Symbol::Concept(_))))
            .collect()
    }

    pub(crate) fn justify(&mut self, o: &Ontology, goal: &Axiom) -> Result<Vec<Axiom>, FbpError> {
        let key = (o.canonical_key(), goal.clone());
        if let Some(j) = self.justifications.get(&key) {
            return Ok(j.clone());
        }
        let j = one_justification(o, goal, &self.oracle)?.axioms;
        self.justifications.insert(key, j.clone());
        Ok(j)
    }

    /// `(j)^{-x}` re-justified for the goal, or `None` if forgetting failed
    /// or lost the goal.
    pub(crate) fn step(&mut self, j: &Ontology, x: &Symbol) -> Result<Option<Ontology>, FbpError> {
        self.check_budget()?;
        let key = (j.canonical_key(), x.clone());
        if let Some(r) = self.cache.get(&key) {
            return Ok(r.clone());
        }
        self.stats.forgetting_calls += 1;
        let out = match forget(j, x, self.timeout) {
            ForgettingResult::Success(r) => match one_justification(&r, &self.goal, &self.oracle) {
                Ok(next) => Some(next.to_ontology()),
                Err(JustifyError::NotEntailed) => None,
                Err(JustifyError::Reasoner(e)) => return Err(e.into()),
            },
            ForgettingResult::Failure { .. } => None,
        };
        if out.is_none() {
            self.stats.failures += 1;
        }
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    pub(crate) fn finish(&mut self, steps: Vec<TraceStep>, proof: Proof) -> (Proof, FbpTrace) {
        self.stats.elapsed_ms = self.started.elapsed().as_millis() as u64;
        (proof.clone(), FbpTrace { steps, final_proof: proof, stats: self.stats })
    }
}

/// Number of syntactic occurrences of `s` in `o`.
pub(crate) fn occurrences(o: &Ontology, s: &Symbol) -> usize {
    fn in_concept(c: &ConceptExpr, s: &Symbol) -> usize {
        let mut n = 0;
        c.walk(&mut |e| match (e, s) {
            (ConceptExpr::Atomic(a), Symbol::Concept(x)) if a == x => n += 1,
            (ConceptExpr::Exists(r, _) | ConceptExpr::Forall(r, _), Symbol::Role(x)) if r == x => n += 1,
            _ => {}
        });
        n
    }
    o.iter()
        .map(|a| match a {
            Axiom::ConceptInclusion { lhs, rhs } => in_concept(lhs, s) + in_concept(rhs, s),
            Axiom::RoleInclusion { sub, sup } => {
                usize::from(matches!(s, Symbol::Role(x) if x == sub)) + usize::from(matches!(s, Symbol::Role(x) if x == sup))
            }
        })
        .sum()
}

/// Builds the proof for a sequence `J₀ → J₁ → … → Jₙ` of justifications,
/// where `Jᵢ` came from forgetting `names[i-1]` in `Jᵢ₋₁`.
pub(crate) fn sequence_proof(ctx: &mut Ctx, states: &[Ontology], names: &[Symbol]) -> Result<ProofTree, FbpError> {
    debug_assert_eq!(states.len(), names.len() + 1);
    let n = states.len() - 1;
    let goal = ctx.goal.clone();
    if states[n].contains(&goal) {
        return node(ctx, states, names, &goal, n);
    }
    let rule = names.last().map_or(InferenceRule::Entailment, |x| InferenceRule::Forget(x.clone()));
    let premises = states[n].axioms().to_vec();
    let children = premises.iter().map(|p| node(ctx, states, names, p, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree::Node { axiom: goal, rule, premises: children })
}

fn node(ctx: &mut Ctx, states: &[Ontology], names: &[Symbol], a: &Axiom, t: usize) -> Result<ProofTree, FbpError> {
    let intro = (1..=t).rev().find(|&i| states[i].contains(a) && !states[i - 1].contains(a));
    let Some(i) = intro else {
        debug_assert!(states[0].contains(a));
        return Ok(ProofTree::asserted(a.clone()));
    };
    let premises = ctx.justify(&states[i - 1], a)?;
    let children = premises.iter().map(|p| node(ctx, states, names, p, i - 1)).collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree::Node { axiom: a.clone(), rule: InferenceRule::Forget(names[i - 1].clone()), premises: children })
}

/// Continues a sequence heuristically over the given names; shared by
/// HEUR and by the completion phase of SYMB.
pub(crate) fn heuristic_steps(
    ctx: &mut Ctx,
    states: &mut Vec<Ontology>,
    names: &mut Vec<Symbol>,
    trace: &mut Vec<TraceStep>,
    mut pool: Vec<Symbol>,
) -> Result<(), FbpError> {
    loop {
        ctx.check_budget()?;
        let j = states.last().expect("non-empty").clone();
        let present = Signature::of(&j);
        let mut options: Vec<&Symbol> = pool.iter().filter(|s| present.contains(s) && !ctx.is_goal_name(s)).collect();
        if options.is_empty() {
            return Ok(());
        }
        options.sort_by_key(|s| (occurrences(&j, s), (*s).clone()));
        let x = options[0].clone();
        pool.retain(|s| *s != x);
        let next = ctx.step(&j, &x)?;
        trace.push(TraceStep { forgotten: x.clone(), before: j, after: next.clone() });
        if let Some(next) = next {
            states.push(next);
            names.push(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    #[test]
    fn occurrence_counts() {
        let o = parse_ontology("SubClassOf(A ObjectSomeValuesFrom(r A)) SubObjectPropertyOf(r s)").unwrap();
        assert_eq!(occurrences(&o, &Symbol::Concept(crate::syntax::ConceptName::new("A"))), 2);
        assert_eq!(occurrences(&o, &Symbol::Role(crate::syntax::RoleName::new("r"))), 2);
    }

    #[test]
    fn method_names() {
        for m in FbpMethod::ALL {
            assert_eq!(m.as_str().parse::<FbpMethod>().unwrap(), m);
        }
    }

    #[test]
    fn zero_budget() {
        let o = parse_ontology("SubClassOf(A B) SubClassOf(B C)").unwrap();
        for m in FbpMethod::ALL {
            let mut t = FbpTask::new(o.clone(), Axiom::atomic("A", "C"), m);
            t.overall_budget = Duration::ZERO;
            assert_eq!(run(&t).unwrap_err(), FbpError::BudgetExceeded);
        }
    }
}

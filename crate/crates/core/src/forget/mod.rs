//! Forgetting single concept and role names.
//!
//! Concept names are eliminated by the cheapest applicable method: a
//! single-polarity substitution by `⊤`/`⊥`, Ackermann's lemma, or
//! clause-level resolution with definers (see [`resolution`]). Role names are
//! handled for the case where every occurrence sits directly below a clause
//! (see [`roles`]). Axioms that do not mention the name are kept verbatim;
//! derived axioms are simplified and appended in a fixed order.

mod resolution;
mod roles;
mod simplify;

use std::fmt;
use std::time::{Duration, Instant};

use crate::render::functional;
use crate::syntax::{Axiom, ConceptExpr, ConceptName, Ontology, RoleName, Symbol};

pub use simplify::{simplify, simplify_axiom, simplify_concept};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_millis(2000);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    Timeout,
    Inexpressible,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::Timeout => "timeout",
            FailureReason::Inexpressible => "inexpressible",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForgettingResult {
    Success(Ontology),
    Failure { reason: FailureReason, elapsed_ms: u64 },
}

impl ForgettingResult {
    pub fn ontology(&self) -> Option<&Ontology> {
        match self {
            ForgettingResult::Success(o) => Some(o),
            ForgettingResult::Failure { .. } => None,
        }
    }
}

/// Cooperative deadline.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Deadline {
    start: Instant,
    limit: Duration,
}

impl Deadline {
    pub(crate) fn new(limit: Duration) -> Self {
        Deadline { start: Instant::now(), limit }
    }

    pub(crate) fn expired(&self) -> bool {
        self.limit.is_zero() || self.start.elapsed() >= self.limit
    }

    fn elapsed_ms(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }
}

/// Internal failure carried up to the public result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fail(pub FailureReason);

pub fn forget(o: &Ontology, s: &Symbol, timeout: Duration) -> ForgettingResult {
    match s {
        Symbol::Concept(x) => forget_concept_name(o, x, timeout),
        Symbol::Role(r) => forget_role_name(o, r, timeout),
    }
}

pub fn forget_concept_name(o: &Ontology, x: &ConceptName, timeout: Duration) -> ForgettingResult {
    let deadline = Deadline::new(timeout);
    finish(o, &Symbol::Concept(x.clone()), deadline, |with_x| eliminate_concept(o, with_x, x, deadline))
}

pub fn forget_role_name(o: &Ontology, r: &RoleName, timeout: Duration) -> ForgettingResult {
    let deadline = Deadline::new(timeout);
    finish(o, &Symbol::Role(r.clone()), deadline, |with_r| roles::eliminate(o, with_r, r, deadline))
}

fn finish(
    o: &Ontology,
    s: &Symbol,
    deadline: Deadline,
    eliminate: impl FnOnce(&[Axiom]) -> Result<Vec<Axiom>, Fail>,
) -> ForgettingResult {
    if deadline.expired() {
        return ForgettingResult::Failure { reason: FailureReason::Timeout, elapsed_ms: deadline.elapsed_ms() };
    }
    let (with, without): (Vec<Axiom>, Vec<Axiom>) = o.iter().cloned().partition(|a| a.mentions(s));
    let derived = match eliminate(&with) {
        Ok(d) => d,
        Err(Fail(reason)) => return ForgettingResult::Failure { reason, elapsed_ms: deadline.elapsed_ms() },
    };
    if deadline.expired() {
        return ForgettingResult::Failure { reason: FailureReason::Timeout, elapsed_ms: deadline.elapsed_ms() };
    }
    let mut extra: Vec<Axiom> = derived.iter().filter_map(simplify_axiom).collect();
    extra.sort_by_cached_key(functional);
    let mut out = Ontology::from_axioms(o.name(), without);
    for a in extra {
        debug_assert!(!a.mentions(s));
        out.insert(a);
    }
    ForgettingResult::Success(out)
}

/// Splits `C ⊑ D₁ ⊓ D₂` and `C₁ ⊔ C₂ ⊑ D` into their parts.
fn split(a: &Axiom, out: &mut Vec<Axiom>) {
    match a {
        Axiom::ConceptInclusion { lhs, rhs: ConceptExpr::And(ds) } => {
            for d in ds {
                split(&Axiom::ci(lhs.clone(), d.clone()), out);
            }
        }
        Axiom::ConceptInclusion { lhs: ConceptExpr::Or(cs), rhs } => {
            for c in cs {
                split(&Axiom::ci(c.clone(), rhs.clone()), out);
            }
        }
        _ => out.push(a.clone()),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Polarity {
    pub pos: bool,
    pub neg: bool,
}

fn polarity_in(c: &ConceptExpr, x: &ConceptName, positive: bool, p: &mut Polarity) {
    match c {
        ConceptExpr::Atomic(a) if a == x => {
            if positive {
                p.pos = true;
            } else {
                p.neg = true;
            }
        }
        ConceptExpr::Not(inner) => polarity_in(inner, x, !positive, p),
        _ => {
            for ch in c.children() {
                polarity_in(ch, x, positive, p);
            }
        }
    }
}

fn polarity(a: &Axiom, x: &ConceptName) -> Polarity {
    let mut p = Polarity::default();
    if let Axiom::ConceptInclusion { lhs, rhs } = a {
        polarity_in(lhs, x, false, &mut p);
        polarity_in(rhs, x, true, &mut p);
    }
    p
}

fn substitute(a: &Axiom, x: &ConceptName, by: &ConceptExpr) -> Axiom {
    match a {
        Axiom::ConceptInclusion { lhs, rhs } => Axiom::ci(lhs.substitute(x, by), rhs.substitute(x, by)),
        other => other.clone(),
    }
}

fn eliminate_concept(o: &Ontology, with_x: &[Axiom], x: &ConceptName, deadline: Deadline) -> Result<Vec<Axiom>, Fail> {
    let mut parts = Vec::new();
    for a in with_x {
        split(a, &mut parts);
    }
    let (mut rest, mut out): (Vec<Axiom>, Vec<Axiom>) =
        parts.into_iter().partition(|a| a.mentions(&Symbol::Concept(x.clone())));
    let total = rest.iter().fold(Polarity::default(), |acc, a| {
        let p = polarity(a, x);
        Polarity { pos: acc.pos || p.pos, neg: acc.neg || p.neg }
    });
    if !total.neg || !total.pos {
        let by = if total.neg { ConceptExpr::Bottom } else { ConceptExpr::Top };
        out.extend(rest.iter().map(|a| substitute(a, x, &by)));
        return Ok(out);
    }

    let xa = ConceptExpr::Atomic(x.clone());
    // Positive definitions C ⊑ x with the remaining occurrences all negative.
    let is_pos_def = |a: &Axiom| matches!(a, Axiom::ConceptInclusion { lhs, rhs } if *rhs == xa && !lhs.mentions_concept(x));
    let is_neg_def = |a: &Axiom| matches!(a, Axiom::ConceptInclusion { lhs, rhs } if *lhs == xa && !rhs.mentions_concept(x));
    if rest.iter().filter(|a| !is_pos_def(a)).all(|a| !polarity(a, x).pos) {
        let (defs, others): (Vec<Axiom>, Vec<Axiom>) = rest.drain(..).partition(|a| is_pos_def(a));
        let by = ConceptExpr::or(defs.iter().map(|d| match d {
            Axiom::ConceptInclusion { lhs, .. } => lhs.clone(),
            _ => unreachable!(),
        }));
        out.extend(others.iter().map(|a| substitute(a, x, &by)));
        return Ok(out);
    }
    if rest.iter().filter(|a| !is_neg_def(a)).all(|a| !polarity(a, x).neg) {
        let (defs, others): (Vec<Axiom>, Vec<Axiom>) = rest.drain(..).partition(|a| is_neg_def(a));
        let by = ConceptExpr::and(defs.iter().map(|d| match d {
            Axiom::ConceptInclusion { rhs, .. } => rhs.clone(),
            _ => unreachable!(),
        }));
        out.extend(others.iter().map(|a| substitute(a, x, &by)));
        return Ok(out);
    }

    out.extend(resolution::eliminate(o, &rest, x, deadline)?);
    Ok(out)
}

/// Negation of `c` if it can be written without a complement at the top:
/// `¬C ↦ C`, `⊥ ↦ ⊤`, `∀r.F ↦ ∃r.¬F`.
fn negate_simple(c: &ConceptExpr) -> Option<ConceptExpr> {
    match c {
        ConceptExpr::Not(inner) => Some(inner.as_ref().clone()),
        ConceptExpr::Bottom => Some(ConceptExpr::Top),
        ConceptExpr::Forall(r, f) => negate_simple(f).map(|g| ConceptExpr::exists(r.clone(), g)),
        _ => None,
    }
}

/// Turns a disjunction of NNF concepts into an inclusion, moving negated
/// disjuncts to the left-hand side.
pub(crate) fn clause_to_axiom(disjuncts: &[ConceptExpr]) -> Axiom {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for d in disjuncts {
        match negate_simple(d) {
            Some(n) => lhs.push(n),
            None => rhs.push(d.clone()),
        }
    }
    Axiom::ci(ConceptExpr::and(lhs), ConceptExpr::or(rhs))
}

/// Top-level conjunctive normal form; literals are arbitrary non-`⊓`/`⊔`
/// concepts.
pub(crate) fn top_cnf(c: &ConceptExpr) -> Vec<Vec<ConceptExpr>> {
    match c {
        ConceptExpr::Top => Vec::new(),
        ConceptExpr::Bottom => vec![Vec::new()],
        ConceptExpr::And(cs) => cs.iter().flat_map(top_cnf).collect(),
        ConceptExpr::Or(cs) => {
            let mut acc = vec![Vec::new()];
            for part in cs {
                let sub = top_cnf(part);
                acc = acc
                    .iter()
                    .flat_map(|a: &Vec<ConceptExpr>| {
                        sub.iter().map(move |b| a.iter().chain(b.iter()).cloned().collect::<Vec<_>>())
                    })
                    .collect();
            }
            acc
        }
        other => vec![vec![other.clone()]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    fn forget_c(text: &str, x: &str) -> Ontology {
        let o = parse_ontology(text).unwrap();
        match forget_concept_name(&o, &ConceptName::new(x), DEFAULT_TIMEOUT) {
            ForgettingResult::Success(r) => r,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_resolves() {
        let r = forget_c("SubClassOf(A B) SubClassOf(B C)", "B");
        assert_eq!(r.axioms(), &[Axiom::atomic("A", "C")]);
    }

    #[test]
    fn some_only_clash_gives_bottom() {
        let r = forget_c(
            "SubClassOf(C ObjectSomeValuesFrom(r D)) SubClassOf(C ObjectAllValuesFrom(r ObjectComplementOf(D)))",
            "D",
        );
        assert_eq!(r.axioms(), &[Axiom::ci(ConceptExpr::atom("C"), ConceptExpr::Bottom)]);
    }

    #[test]
    fn zero_timeout() {
        let o = parse_ontology("SubClassOf(A B)").unwrap();
        let r = forget_concept_name(&o, &ConceptName::new("B"), Duration::ZERO);
        assert!(matches!(r, ForgettingResult::Failure { reason: FailureReason::Timeout, .. }));
    }

    #[test]
    fn single_polarity() {
        let r = forget_c("SubClassOf(A ObjectIntersectionOf(B X)) SubClassOf(C D)", "X");
        assert_eq!(r.axioms(), &[Axiom::atomic("C", "D"), Axiom::atomic("A", "B")]);
    }

    #[test]
    fn cyclic_definition_is_inexpressible() {
        let o = parse_ontology(
            "SubClassOf(A ObjectSomeValuesFrom(r X)) SubClassOf(X ObjectSomeValuesFrom(r X)) SubClassOf(X B) \
             SubClassOf(ObjectIntersectionOf(B F) X)",
        )
        .unwrap();
        let r = forget_concept_name(&o, &ConceptName::new("X"), DEFAULT_TIMEOUT);
        assert!(matches!(r, ForgettingResult::Failure { reason: FailureReason::Inexpressible, .. }), "{r:?}");
    }

    #[test]
    fn clause_translation() {
        let a = clause_to_axiom(&[ConceptExpr::not(ConceptExpr::atom("A")), ConceptExpr::atom("B")]);
        assert_eq!(a, Axiom::atomic("A", "B"));
        let b = clause_to_axiom(&[ConceptExpr::not(ConceptExpr::atom("C"))]);
        assert_eq!(b, Axiom::ci(ConceptExpr::atom("C"), ConceptExpr::Bottom));
    }
}

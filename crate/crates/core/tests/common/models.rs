//! Brute-force search for small countermodels. Finding one refutes an
//! entailment; finding none proves nothing, so callers only use it to
//! catch unsound "entailed" answers.

use dlproof_core::{Axiom, ConceptExpr, ConceptName, HasSignature, RoleName, Signature};

struct Interp<'a> {
    n: usize,
    concepts: &'a [ConceptName],
    roles: &'a [RoleName],
    concept_bits: u64,
    role_bits: u64,
}

impl Interp<'_> {
    fn all(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn name(&self, a: &ConceptName) -> u64 {
        let i = self.concepts.iter().position(|c| c == a).unwrap();
        (self.concept_bits >> (i * self.n)) & self.all()
    }

    fn edge(&self, r: &RoleName, x: usize, y: usize) -> bool {
        let i = self.roles.iter().position(|s| s == r).unwrap();
        (self.role_bits >> (i * self.n * self.n + x * self.n + y)) & 1 == 1
    }

    fn ext(&self, c: &ConceptExpr) -> u64 {
        match c {
            ConceptExpr::Top => self.all(),
            ConceptExpr::Bottom => 0,
            ConceptExpr::Atomic(a) => self.name(a),
            ConceptExpr::Not(d) => self.all() & !self.ext(d),
            ConceptExpr::And(ds) => ds.iter().fold(self.all(), |m, d| m & self.ext(d)),
            ConceptExpr::Or(ds) => ds.iter().fold(0, |m, d| m | self.ext(d)),
            ConceptExpr::Exists(r, d) => {
                let f = self.ext(d);
                (0..self.n).filter(|&x| (0..self.n).any(|y| f >> y & 1 == 1 && self.edge(r, x, y))).fold(0, |m, x| m | 1 << x)
            }
            ConceptExpr::Forall(r, d) => {
                let f = self.ext(d);
                (0..self.n).filter(|&x| (0..self.n).all(|y| !self.edge(r, x, y) || f >> y & 1 == 1)).fold(0, |m, x| m | 1 << x)
            }
        }
    }

    fn holds(&self, a: &Axiom) -> bool {
        match a {
            Axiom::ConceptInclusion { lhs, rhs } => self.ext(lhs) & !self.ext(rhs) == 0,
            Axiom::RoleInclusion { sub, sup } => {
                (0..self.n).all(|x| (0..self.n).all(|y| !self.edge(sub, x, y) || self.edge(sup, x, y)))
            }
        }
    }
}

/// Whether some interpretation with at most `max_size` elements satisfies
/// `axioms` but not `goal`. Gives up (returns false) once the search space
/// exceeds 2^22 interpretations per domain size.
pub fn countermodel_exists(axioms: &[Axiom], goal: &Axiom, max_size: usize) -> bool {
    let mut sig = Signature::of(axioms);
    goal.collect_signature(&mut sig);
    let concepts: Vec<ConceptName> = sig.concepts.iter().cloned().collect();
    let roles: Vec<RoleName> = sig.roles.iter().cloned().collect();
    for n in 1..=max_size {
        let cb = concepts.len() * n;
        let rb = roles.len() * n * n;
        if cb + rb > 22 {
            return false;
        }
        for concept_bits in 0..(1u64 << cb) {
            for role_bits in 0..(1u64 << rb) {
                let i = Interp { n, concepts: &concepts, roles: &roles, concept_bits, role_bits };
                if axioms.iter().all(|a| i.holds(a)) && !i.holds(goal) {
                    return true;
                }
            }
        }
    }
    false
}

//! Role forgetting for clauses with a single top-level `∃r`/`∀r` literal.
//!
//! For `C₁ ⊔ ∃r.D` and universal clauses `Cᵢ ⊔ ∀r.Eᵢ`, every minimal set S
//! of universal clauses with `D ⊓ ⨅E_S` unsatisfiable yields `C₁ ⊔ ⨆C_S`.
//! Satisfiable combinations survive under each strict super-role `s` as
//! `C₁ ⊔ ⨆C_S ⊔ ∃s.(D ⊓ ⨅E_S)`; universal clauses are passed down to strict
//! sub-roles. Any other occurrence of `r` makes the call inexpressible.

use super::{clause_to_axiom, top_cnf, Deadline, Fail, FailureReason};
use crate::elh::RoleHierarchy;
use crate::syntax::{Axiom, ConceptExpr, Ontology, RoleName};
use crate::tableau::{self, TableauConfig};

/// Upper bound on universal clauses combined for one existential.
const MAX_UNIVERSALS: usize = 12;

struct Split {
    rest: Vec<ConceptExpr>,
    filler: ConceptExpr,
}

pub(super) fn eliminate(o: &Ontology, axioms: &[Axiom], r: &RoleName, deadline: Deadline) -> Result<Vec<Axiom>, Fail> {
    let hierarchy = RoleHierarchy::from_axioms(o.axioms());
    let subs: Vec<RoleName> = hierarchy.subs(r).filter(|q| *q != r).cloned().collect();
    let supers: Vec<RoleName> = hierarchy.supers(r).filter(|s| *s != r).cloned().collect();

    let mut exists = Vec::new();
    let mut forall = Vec::new();
    for a in axioms {
        let Axiom::ConceptInclusion { lhs, rhs } = a else { continue };
        let c = ConceptExpr::or([ConceptExpr::not(lhs.clone()), rhs.clone()]).nnf(false);
        for clause in top_cnf(&c) {
            let (hits, rest): (Vec<ConceptExpr>, Vec<ConceptExpr>) = clause.into_iter().partition(|d| {
                matches!(d, ConceptExpr::Exists(s, _) | ConceptExpr::Forall(s, _) if s == r)
            });
            if rest.iter().any(|d| d.mentions_role(r)) || hits.len() > 1 {
                return Err(Fail(FailureReason::Inexpressible));
            }
            match hits.into_iter().next() {
                Some(ConceptExpr::Exists(_, f)) if !f.mentions_role(r) => exists.push(Split { rest, filler: *f }),
                Some(ConceptExpr::Forall(_, f)) if !f.mentions_role(r) => forall.push(Split { rest, filler: *f }),
                Some(_) => return Err(Fail(FailureReason::Inexpressible)),
                None => {}
            }
        }
    }
    if forall.len() > MAX_UNIVERSALS && !exists.is_empty() {
        return Err(Fail(FailureReason::Timeout));
    }

    let mut out = Vec::new();
    for u in &forall {
        for q in &subs {
            let mut ds = u.rest.clone();
            ds.push(ConceptExpr::forall(q.clone(), u.filler.clone()));
            out.push(clause_to_axiom(&ds));
        }
    }

    let cfg = TableauConfig::default();
    for e in &exists {
        let mut unsat: Vec<Vec<usize>> = Vec::new();
        for size in 0..=forall.len() {
            for subset in combinations(forall.len(), size) {
                if deadline.expired() {
                    return Err(Fail(FailureReason::Timeout));
                }
                if unsat.iter().any(|m| m.iter().all(|i| subset.contains(i))) {
                    continue;
                }
                let mut ds = e.rest.clone();
                let mut conj = vec![e.filler.clone()];
                for &i in &subset {
                    ds.extend(forall[i].rest.iter().cloned());
                    conj.push(forall[i].filler.clone());
                }
                let filler = ConceptExpr::and(conj);
                let sat = tableau::is_satisfiable(o.axioms(), &filler, cfg).map_err(|_| Fail(FailureReason::Timeout))?;
                if !sat {
                    out.push(clause_to_axiom(&ds));
                    unsat.push(subset);
                    continue;
                }
                for s in &supers {
                    let mut with = ds.clone();
                    with.push(ConceptExpr::exists(s.clone(), filler.clone()));
                    out.push(clause_to_axiom(&with));
                }
            }
        }
    }

    for q in &subs {
        for s in &supers {
            if q != s {
                out.push(Axiom::RoleInclusion { sub: q.clone(), sup: s.clone() });
            }
        }
    }
    Ok(out)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

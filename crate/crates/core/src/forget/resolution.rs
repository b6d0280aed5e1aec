//! Resolution-based elimination of a concept name.
//!
//! Axioms mentioning `x` are turned into clauses. Fillers of `∃`/`∀` that
//! contain `x` are replaced by fresh definers `D ⊑ F`. A clause carries a
//! context, a set of definers whose conjunction it constrains (the empty
//! context is global). Saturation applies
//!
//! * resolution on `x` between clauses whose merged context is in use,
//! * role propagation `∀s.D₁`, `Qr.D₂` (with `r ⊑* s`) into `Qr.D₁₂`,
//!   creating the combined context `{D₁, D₂}`, when the two definers
//!   reach opposite polarities of `x`,
//! * removal of `∃r.D` when `D` is unsatisfiable.
//!
//! Definers are then eliminated by substituting the conjunction of their
//! `x`-free clauses. A definer that depends on itself would need a fixpoint
//! and makes the call fail as inexpressible.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{clause_to_axiom, simplify_concept, Deadline, Fail, FailureReason, Polarity};
use crate::elh::RoleHierarchy;
use crate::syntax::{Axiom, ConceptExpr, ConceptName, Ontology, RoleName};

const MAX_CLAUSES: usize = 20_000;

type SetId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Lit {
    PosX,
    NegX,
    Ex(RoleName, SetId),
    All(RoleName, SetId),
    Opaque(ConceptExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Clause {
    ctx: SetId,
    lits: BTreeSet<Lit>,
}

impl Clause {
    fn has_x(&self) -> bool {
        self.lits.contains(&Lit::PosX) || self.lits.contains(&Lit::NegX)
    }
}

struct State<'a> {
    x: &'a ConceptName,
    roles: RoleHierarchy,
    sets: Vec<BTreeSet<usize>>,
    set_ids: HashMap<BTreeSet<usize>, SetId>,
    fillers: HashMap<ConceptExpr, usize>,
    referenced: BTreeSet<SetId>,
    clauses: Vec<Clause>,
    seen: HashSet<Clause>,
}

pub(super) fn eliminate(o: &Ontology, axioms: &[Axiom], x: &ConceptName, deadline: Deadline) -> Result<Vec<Axiom>, Fail> {
    let mut st = State {
        x,
        roles: RoleHierarchy::from_axioms(o.axioms()),
        sets: Vec::new(),
        set_ids: HashMap::new(),
        fillers: HashMap::new(),
        referenced: BTreeSet::new(),
        clauses: Vec::new(),
        seen: HashSet::new(),
    };
    st.intern(BTreeSet::new());
    for a in axioms {
        if let Axiom::ConceptInclusion { lhs, rhs } = a {
            let c = ConceptExpr::or([ConceptExpr::not(lhs.clone()), rhs.clone()]).nnf(false);
            for lits in st.clausify(&c)? {
                st.add(Clause { ctx: 0, lits })?;
            }
        }
    }
    st.saturate(deadline)?;
    st.translate()
}

impl State<'_> {
    fn intern(&mut self, s: BTreeSet<usize>) -> SetId {
        if let Some(&id) = self.set_ids.get(&s) {
            return id;
        }
        let id = self.sets.len();
        self.sets.push(s.clone());
        self.set_ids.insert(s, id);
        id
    }

    fn subset(&self, a: SetId, b: SetId) -> bool {
        self.sets[a].is_subset(&self.sets[b])
    }

    fn merge(&mut self, a: SetId, b: SetId) -> SetId {
        let u: BTreeSet<usize> = self.sets[a].union(&self.sets[b]).copied().collect();
        self.intern(u)
    }

    fn in_use(&self, ctx: SetId) -> bool {
        ctx == 0 || self.referenced.iter().any(|&s| self.subset(ctx, s))
    }

    fn definer(&mut self, filler: &ConceptExpr) -> Result<SetId, Fail> {
        if let Some(&b) = self.fillers.get(filler) {
            return Ok(self.set_ids[&BTreeSet::from([b])]);
        }
        let b = self.fillers.len();
        self.fillers.insert(filler.clone(), b);
        let sid = self.intern(BTreeSet::from([b]));
        self.referenced.insert(sid);
        for lits in self.clausify(filler)? {
            self.add(Clause { ctx: sid, lits })?;
        }
        Ok(sid)
    }

    /// CNF of an NNF concept over literals; `x`-free parts stay opaque.
    fn clausify(&mut self, c: &ConceptExpr) -> Result<Vec<BTreeSet<Lit>>, Fail> {
        if !c.mentions_concept(self.x) {
            return Ok(match c {
                ConceptExpr::Top => Vec::new(),
                ConceptExpr::Bottom => vec![BTreeSet::new()],
                other => vec![BTreeSet::from([Lit::Opaque(other.clone())])],
            });
        }
        Ok(match c {
            ConceptExpr::Atomic(_) => vec![BTreeSet::from([Lit::PosX])],
            ConceptExpr::Not(_) => vec![BTreeSet::from([Lit::NegX])],
            ConceptExpr::And(cs) => {
                let mut out = Vec::new();
                for part in cs {
                    out.extend(self.clausify(part)?);
                }
                out
            }
            ConceptExpr::Or(cs) => {
                let mut acc = vec![BTreeSet::new()];
                for part in cs {
                    let sub = self.clausify(part)?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &sub {
                            next.push(a.union(b).cloned().collect());
                        }
                    }
                    if next.len() > MAX_CLAUSES {
                        return Err(Fail(FailureReason::Timeout));
                    }
                    acc = next;
                }
                acc
            }
            ConceptExpr::Exists(r, f) => vec![BTreeSet::from([Lit::Ex(r.clone(), self.definer(f)?)])],
            ConceptExpr::Forall(r, f) => vec![BTreeSet::from([Lit::All(r.clone(), self.definer(f)?)])],
            ConceptExpr::Top | ConceptExpr::Bottom => unreachable!("constants never mention x"),
        })
    }

    /// Adds a clause unless it is tautological or subsumed.
    fn add(&mut self, c: Clause) -> Result<bool, Fail> {
        if c.lits.contains(&Lit::PosX) && c.lits.contains(&Lit::NegX) {
            return Ok(false);
        }
        if self.seen.contains(&c) {
            return Ok(false);
        }
        if self.clauses.iter().any(|d| self.subset(d.ctx, c.ctx) && d.lits.is_subset(&c.lits)) {
            return Ok(false);
        }
        if self.clauses.len() >= MAX_CLAUSES {
            return Err(Fail(FailureReason::Timeout));
        }
        self.seen.insert(c.clone());
        self.clauses.push(c);
        Ok(true)
    }

    fn polarity(&self, s: SetId) -> Polarity {
        let mut p = Polarity::default();
        let mut visited = BTreeSet::new();
        let mut stack = vec![s];
        while let Some(s) = stack.pop() {
            if !visited.insert(s) {
                continue;
            }
            for c in &self.clauses {
                if c.ctx == 0 || !self.subset(c.ctx, s) {
                    continue;
                }
                for l in &c.lits {
                    match l {
                        Lit::PosX => p.pos = true,
                        Lit::NegX => p.neg = true,
                        Lit::Ex(_, t) | Lit::All(_, t) => stack.push(*t),
                        Lit::Opaque(_) => {}
                    }
                }
            }
        }
        p
    }

    fn saturate(&mut self, deadline: Deadline) -> Result<(), Fail> {
        let mut done: HashSet<(usize, usize)> = HashSet::new();
        loop {
            let before = (self.clauses.len(), self.referenced.len());
            let n = self.clauses.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    if done.contains(&(i, j)) {
                        continue;
                    }
                    if deadline.expired() {
                        return Err(Fail(FailureReason::Timeout));
                    }
                    if self.infer(i, j)? & self.infer(j, i)? {
                        done.insert((i, j));
                    }
                }
            }
            self.drop_empty_existentials()?;
            if (self.clauses.len(), self.referenced.len()) == before {
                return Ok(());
            }
        }
    }

    /// Inferences with `i` as the positive/universal side. Returns whether
    /// the pair is finished for good.
    fn infer(&mut self, i: usize, j: usize) -> Result<bool, Fail> {
        let (ci, cj) = (self.clauses[i].clone(), self.clauses[j].clone());
        let mut finished = true;

        if ci.lits.contains(&Lit::PosX) && cj.lits.contains(&Lit::NegX) {
            let ctx = self.merge(ci.ctx, cj.ctx);
            if self.in_use(ctx) {
                let mut lits: BTreeSet<Lit> = ci.lits.iter().filter(|l| **l != Lit::PosX).cloned().collect();
                lits.extend(cj.lits.iter().filter(|l| **l != Lit::NegX).cloned());
                self.add(Clause { ctx, lits })?;
            } else {
                finished = false;
            }
        }

        for li in &ci.lits {
            let Lit::All(s, d1) = li else { continue };
            for lj in &cj.lits {
                let (r, d2, exists) = match lj {
                    Lit::Ex(r, d) => (r, *d, true),
                    Lit::All(r, d) => (r, *d, false),
                    _ => continue,
                };
                if !self.roles.is_sub(r, s) {
                    continue;
                }
                let combined = self.merge(*d1, d2);
                if combined == d2 {
                    continue;
                }
                let (p1, p2) = (self.polarity(*d1), self.polarity(d2));
                if !((p1.pos && p2.neg) || (p1.neg && p2.pos)) {
                    finished = false;
                    continue;
                }
                let ctx = self.merge(ci.ctx, cj.ctx);
                if !self.in_use(ctx) {
                    finished = false;
                    continue;
                }
                let mut lits: BTreeSet<Lit> = ci.lits.iter().filter(|l| *l != li).cloned().collect();
                lits.extend(cj.lits.iter().filter(|l| *l != lj).cloned());
                lits.insert(if exists { Lit::Ex(r.clone(), combined) } else { Lit::All(r.clone(), combined) });
                if self.add(Clause { ctx, lits })? {
                    self.referenced.insert(combined);
                }
            }
        }
        Ok(finished)
    }

    /// `C ⊔ ∃r.D` with `D ⊑ ⊥` yields `C`.
    fn drop_empty_existentials(&mut self) -> Result<(), Fail> {
        let empties: Vec<SetId> = self.clauses.iter().filter(|c| c.lits.is_empty()).map(|c| c.ctx).collect();
        if empties.is_empty() {
            return Ok(());
        }
        let mut fresh = Vec::new();
        for c in &self.clauses {
            for l in &c.lits {
                if let Lit::Ex(_, s) = l {
                    if empties.iter().any(|&e| self.subset(e, *s)) {
                        let lits = c.lits.iter().filter(|m| *m != l).cloned().collect();
                        fresh.push(Clause { ctx: c.ctx, lits });
                    }
                }
            }
        }
        for c in fresh {
            self.add(c)?;
        }
        Ok(())
    }

    fn translate(&self) -> Result<Vec<Axiom>, Fail> {
        let free: Vec<&Clause> = self.clauses.iter().filter(|c| !c.has_x()).collect();
        let mut memo = HashMap::new();
        let mut stack = Vec::new();
        let mut clauses: Vec<BTreeSet<ConceptExpr>> = Vec::new();
        for c in free.iter().filter(|c| c.ctx == 0) {
            let mut disjuncts = BTreeSet::new();
            let mut tautology = false;
            for l in &c.lits {
                match simplify_concept(&self.lit(l, &free, &mut memo, &mut stack)?) {
                    ConceptExpr::Top => tautology = true,
                    ConceptExpr::Bottom => {}
                    d => {
                        disjuncts.insert(d);
                    }
                }
            }
            if !tautology {
                clauses.push(disjuncts);
            }
        }
        clauses.sort();
        clauses.dedup();
        let minimal: Vec<&BTreeSet<ConceptExpr>> = clauses
            .iter()
            .filter(|c| !clauses.iter().any(|d| d != *c && d.is_subset(c)))
            .collect();
        Ok(minimal
            .into_iter()
            .map(|c| clause_to_axiom(&c.iter().cloned().collect::<Vec<_>>()))
            .collect())
    }

    fn lit(
        &self,
        l: &Lit,
        free: &[&Clause],
        memo: &mut HashMap<SetId, ConceptExpr>,
        stack: &mut Vec<SetId>,
    ) -> Result<ConceptExpr, Fail> {
        Ok(match l {
            Lit::Opaque(c) => c.clone(),
            Lit::Ex(r, s) => ConceptExpr::exists(r.clone(), self.define(*s, free, memo, stack)?),
            Lit::All(r, s) => ConceptExpr::forall(r.clone(), self.define(*s, free, memo, stack)?),
            Lit::PosX | Lit::NegX => unreachable!("x-free clauses only"),
        })
    }

    fn define(
        &self,
        s: SetId,
        free: &[&Clause],
        memo: &mut HashMap<SetId, ConceptExpr>,
        stack: &mut Vec<SetId>,
    ) -> Result<ConceptExpr, Fail> {
        if let Some(c) = memo.get(&s) {
            return Ok(c.clone());
        }
        if stack.contains(&s) {
            return Err(Fail(FailureReason::Inexpressible));
        }
        stack.push(s);
        let mut conj = Vec::new();
        for c in free.iter().filter(|c| c.ctx != 0 && self.subset(c.ctx, s)) {
            let mut ds = Vec::new();
            for l in &c.lits {
                ds.push(self.lit(l, free, memo, stack)?);
            }
            conj.push(ConceptExpr::or(ds));
        }
        stack.pop();
        let def = simplify_concept(&ConceptExpr::and(conj));
        memo.insert(s, def.clone());
        Ok(def)
    }
}

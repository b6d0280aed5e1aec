//! Consequence-based saturation for ELH.
//!
//! Subsumers are computed for a fixed set of contexts: `⊤`, every concept
//! name and every existential filler of the ontology. Only subexpressions of
//! the ontology are materialized, so the closure is finite. Every rule
//! application is recorded as a hyperedge of the [`DerivationStructure`],
//! including alternative derivations of facts that are already known.
//! Premises that are tautologies (`C ⊑ C`, `C ⊑ ⊤`) are left out of the
//! recorded edges.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::derivation::{DerivationStructure, InferenceRule};
use crate::syntax::{Axiom, ConceptExpr, ConceptName, Fragment, HasSignature, Ontology, RoleName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("expected an ELH ontology, found {found:?} construct in {axiom}")]
pub struct FragmentError {
    pub found: Fragment,
    pub axiom: String,
}

pub(crate) fn check_elh(o: &Ontology) -> Result<(), FragmentError> {
    match o.iter().find(|a| !a.is_elh()) {
        Some(a) => Err(FragmentError { found: Fragment::Alch, axiom: crate::render::functional(a) }),
        None => Ok(()),
    }
}

/// Reflexive-transitive closure of told role inclusions.
#[derive(Clone, Debug, Default)]
pub struct RoleHierarchy {
    sups: HashMap<RoleName, BTreeSet<RoleName>>,
}

impl RoleHierarchy {
    pub fn from_axioms<'a, I: IntoIterator<Item = &'a Axiom>>(axioms: I) -> Self {
        let mut direct: HashMap<RoleName, BTreeSet<RoleName>> = HashMap::new();
        for a in axioms {
            if let Axiom::RoleInclusion { sub, sup } = a {
                direct.entry(sub.clone()).or_default().insert(sup.clone());
            }
        }
        let mut sups = HashMap::new();
        for r in direct.keys() {
            let mut seen = BTreeSet::new();
            let mut stack = vec![r.clone()];
            while let Some(x) = stack.pop() {
                if seen.insert(x.clone()) {
                    if let Some(next) = direct.get(&x) {
                        stack.extend(next.iter().cloned());
                    }
                }
            }
            seen.remove(r);
            sups.insert(r.clone(), seen);
        }
        RoleHierarchy { sups }
    }

    /// `r ⊑* s`
    pub fn is_sub(&self, r: &RoleName, s: &RoleName) -> bool {
        r == s || self.sups.get(r).is_some_and(|set| set.contains(s))
    }

    /// Strict super-roles of `r`.
    pub fn supers(&self, r: &RoleName) -> impl Iterator<Item = &RoleName> {
        self.sups.get(r).into_iter().flatten()
    }

    /// Strict sub-roles of `r`.
    pub fn subs<'a>(&'a self, r: &'a RoleName) -> impl Iterator<Item = &'a RoleName> + 'a {
        self.sups.iter().filter(move |(_, s)| s.contains(r)).map(|(q, _)| q)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&RoleName, &RoleName)> {
        self.sups.iter().flat_map(|(r, ss)| ss.iter().map(move |s| (r, s)))
    }
}

type Cid = usize;

struct Saturator {
    concepts: Vec<ConceptExpr>,
    ids: HashMap<ConceptExpr, Cid>,
    top: Cid,
    /// lhs -> (rhs, told axiom)
    told: HashMap<Cid, Vec<(Cid, Axiom)>>,
    /// conjunct -> conjunctions occurring on a left-hand side
    neg_ands: HashMap<Cid, Vec<Cid>>,
    /// filler -> (role, existential) occurring on a left-hand side
    neg_exists: HashMap<Cid, Vec<(RoleName, Cid)>>,
    subs: HashMap<Cid, HashSet<Cid>>,
    /// filler D -> (context C, role r) with `C ⊑ ∃r.D` processed
    exists_pred: HashMap<Cid, Vec<(Cid, RoleName)>>,
    roles: RoleHierarchy,
    queued: HashSet<(Cid, Cid)>,
    queue: VecDeque<(Cid, Cid)>,
    out: DerivationStructure,
}

impl Saturator {
    fn intern(&mut self, c: &ConceptExpr) -> Cid {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        for child in c.children() {
            self.intern(child);
        }
        let id = self.concepts.len();
        self.concepts.push(c.clone());
        self.ids.insert(c.clone(), id);
        id
    }

    fn ci(&self, c: Cid, d: Cid) -> Axiom {
        Axiom::ci(self.concepts[c].clone(), self.concepts[d].clone())
    }

    fn role_axiom(r: &RoleName, s: &RoleName) -> Axiom {
        Axiom::RoleInclusion { sub: r.clone(), sup: s.clone() }
    }

    fn enqueue(&mut self, c: Cid, d: Cid) {
        if self.queued.insert((c, d)) {
            self.queue.push_back((c, d));
        }
    }

    /// Records `premises ⊢ c ⊑ d`, dropping tautological premises.
    fn derive(&mut self, premises: Vec<Axiom>, c: Cid, d: Cid, rule: InferenceRule) {
        let conclusion = self.ci(c, d);
        let premises: Vec<Axiom> = premises.into_iter().filter(|p| !p.is_tautology()).collect();
        if premises.contains(&conclusion) {
            return;
        }
        self.out.add_inference(premises, conclusion, rule);
        self.enqueue(c, d);
    }

    fn role_premise(r: &RoleName, s: &RoleName) -> Option<Axiom> {
        (r != s).then(|| Self::role_axiom(r, s))
    }

    fn process(&mut self, c: Cid, d: Cid) {
        self.subs.entry(c).or_default().insert(d);
        let c_sub_d = self.ci(c, d);

        if let Some(told) = self.told.get(&d).cloned() {
            for (e, ax) in told {
                if d != c {
                    self.derive(vec![c_sub_d.clone(), ax], c, e, InferenceRule::Hier);
                }
            }
        }

        if let ConceptExpr::And(parts) = self.concepts[d].clone() {
            for p in parts {
                let k = self.ids[&p];
                self.derive(vec![c_sub_d.clone()], c, k, InferenceRule::AndMinus);
            }
        }

        if let Some(ands) = self.neg_ands.get(&d).cloned() {
            for n in ands {
                let ConceptExpr::And(parts) = self.concepts[n].clone() else { continue };
                let ks: Vec<Cid> = parts.iter().map(|p| self.ids[p]).collect();
                if ks.iter().all(|k| self.subs[&c].contains(k)) {
                    let premises = ks.iter().map(|&k| self.ci(c, k)).collect();
                    self.derive(premises, c, n, InferenceRule::AndPlus);
                }
            }
        }

        // c plays the filler D, d plays E in `C ⊑ ∃r.D, D ⊑ E ⊢ C ⊑ ∃s.E`.
        if let Some(targets) = self.neg_exists.get(&d).cloned() {
            let preds = self.exists_pred.get(&c).cloned().unwrap_or_default();
            for (s, ex) in &targets {
                for (c2, r) in &preds {
                    if self.roles.is_sub(r, s) {
                        let via = self.ids[&ConceptExpr::exists(r.clone(), self.concepts[c].clone())];
                        let mut premises = vec![self.ci(*c2, via), c_sub_d.clone()];
                        premises.extend(Self::role_premise(r, s));
                        self.derive(premises, *c2, *ex, InferenceRule::Exists);
                    }
                }
            }
        }

        if let ConceptExpr::Exists(r, filler) = self.concepts[d].clone() {
            let f = self.ids[filler.as_ref()];
            self.exists_pred.entry(f).or_default().push((c, r.clone()));
            let filler_subs: Vec<Cid> = self.subs.get(&f).map(|s| s.iter().copied().collect()).unwrap_or_default();
            let mut filler_subs = filler_subs;
            filler_subs.sort_unstable();
            for e in filler_subs {
                let Some(targets) = self.neg_exists.get(&e).cloned() else { continue };
                for (s, ex) in targets {
                    if self.roles.is_sub(&r, &s) {
                        let mut premises = vec![c_sub_d.clone(), self.ci(f, e)];
                        premises.extend(Self::role_premise(&r, &s));
                        self.derive(premises, c, ex, InferenceRule::Exists);
                    }
                }
            }
        }
    }
}

/// Saturates an ELH ontology and returns the full derivation structure.
pub fn saturate(o: &Ontology) -> Result<DerivationStructure, FragmentError> {
    check_elh(o)?;
    let mut s = Saturator {
        concepts: Vec::new(),
        ids: HashMap::new(),
        top: 0,
        told: HashMap::new(),
        neg_ands: HashMap::new(),
        neg_exists: HashMap::new(),
        subs: HashMap::new(),
        exists_pred: HashMap::new(),
        roles: RoleHierarchy::from_axioms(o.axioms()),
        queued: HashSet::new(),
        queue: VecDeque::new(),
        out: DerivationStructure::new(),
    };
    s.top = s.intern(&ConceptExpr::Top);

    for a in o.iter() {
        s.out.assert_axiom(a.clone());
        if let Axiom::ConceptInclusion { lhs, rhs } = a {
            let l = s.intern(lhs);
            let r = s.intern(rhs);
            s.told.entry(l).or_default().push((r, a.clone()));
            lhs.walk(&mut |sub| match sub {
                ConceptExpr::And(parts) => {
                    let n = s.ids[sub];
                    for p in parts {
                        let k = s.ids[p];
                        let list = s.neg_ands.entry(k).or_default();
                        if !list.contains(&n) {
                            list.push(n);
                        }
                    }
                }
                ConceptExpr::Exists(role, filler) => {
                    let ex = s.ids[sub];
                    let f = s.ids[filler.as_ref()];
                    let list = s.neg_exists.entry(f).or_default();
                    if !list.iter().any(|(_, e)| *e == ex) {
                        list.push((role.clone(), ex));
                    }
                }
                _ => {}
            });
        }
    }

    let pairs: Vec<(RoleName, RoleName)> = s.roles.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
    for (r, t) in &pairs {
        s.out.add_vertex(Saturator::role_axiom(r, t));
    }
    for (r, m) in &pairs {
        for t in s.roles.supers(m).cloned().collect::<Vec<_>>() {
            if &t != r {
                s.out.add_inference(
                    vec![Saturator::role_axiom(r, m), Saturator::role_axiom(m, &t)],
                    Saturator::role_axiom(r, &t),
                    InferenceRule::RoleHier,
                );
            }
        }
    }

    let mut contexts: BTreeSet<ConceptExpr> = BTreeSet::new();
    contexts.insert(ConceptExpr::Top);
    for c in o.signature().concepts {
        contexts.insert(ConceptExpr::Atomic(c));
    }
    for a in o.iter() {
        if let Axiom::ConceptInclusion { lhs, rhs } = a {
            for side in [lhs, rhs] {
                side.walk(&mut |sub| {
                    if let ConceptExpr::Exists(_, f) = sub {
                        contexts.insert(f.as_ref().clone());
                    }
                });
            }
        }
    }
    for ctx in &contexts {
        let c = s.intern(ctx);
        s.subs.entry(c).or_default();
        s.derive(Vec::new(), c, c, InferenceRule::Refl);
        let top = s.top;
        s.derive(Vec::new(), c, top, InferenceRule::Top);
        if let Some(told) = s.told.get(&c).cloned() {
            for (e, _) in told {
                s.enqueue(c, e);
            }
        }
    }

    while let Some((c, d)) = s.queue.pop_front() {
        s.process(c, d);
    }
    Ok(s.out)
}

/// Atomic CIs `A ⊑ B` entailed by an ELH ontology, over its concept names.
/// Sorted; `A ⊑ A` only when `include_tautologies`.
pub fn entailed_atomic_cis(o: &Ontology, include_tautologies: bool) -> Result<Vec<Axiom>, FragmentError> {
    let d = saturate(o)?;
    Ok(atomic_cis_of(&d, o, include_tautologies))
}

/// The atomic CIs among the vertices of an existing saturation of `o`.
pub fn atomic_cis_of(d: &DerivationStructure, o: &Ontology, include_tautologies: bool) -> Vec<Axiom> {
    let names: BTreeSet<ConceptName> = o.signature().concepts;
    let mut out: Vec<Axiom> = d
        .vertices()
        .iter()
        .filter(|a| match a.atomic_parts() {
            Some((x, y)) => {
                names.contains(x) && names.contains(y) && (include_tautologies || x != y)
            }
            None => false,
        })
        .cloned()
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    fn onto(text: &str) -> Ontology {
        parse_ontology(text).unwrap()
    }

    #[test]
    fn chain_has_hier_edge() {
        let d = saturate(&onto("SubClassOf(A B) SubClassOf(B C)")).unwrap();
        let edges = d.edge_set();
        let mut ps = vec![Axiom::atomic("A", "B"), Axiom::atomic("B", "C")];
        ps.sort();
        assert!(edges.contains(&(ps, Axiom::atomic("A", "C"), InferenceRule::Hier)));
    }

    #[test]
    fn empty_ontology_only_top_tautologies() {
        let d = saturate(&Ontology::new("empty")).unwrap();
        assert_eq!(d.vertices(), &[Axiom::ci(ConceptExpr::Top, ConceptExpr::Top)]);
        assert!(d.inferences().iter().all(|i| i.premises.is_empty()));
    }

    #[test]
    fn existential_propagation() {
        let o = onto(
            "SubClassOf(A ObjectSomeValuesFrom(r B)) SubClassOf(B C) \
             SubClassOf(ObjectSomeValuesFrom(r C) D)",
        );
        let cis = entailed_atomic_cis(&o, false).unwrap();
        assert!(cis.contains(&Axiom::atomic("A", "D")));
    }

    #[test]
    fn chain_classification() {
        let cis = entailed_atomic_cis(&onto("SubClassOf(A B) SubClassOf(B C)"), false).unwrap();
        assert_eq!(cis, vec![Axiom::atomic("A", "B"), Axiom::atomic("A", "C"), Axiom::atomic("B", "C")]);
    }

    #[test]
    fn no_atomic_superconcepts() {
        let cis = entailed_atomic_cis(&onto("SubClassOf(A ObjectSomeValuesFrom(r B))"), false).unwrap();
        assert!(cis.is_empty());
    }

    #[test]
    fn role_hierarchy_used() {
        let o = onto(
            "SubObjectPropertyOf(r s) SubObjectPropertyOf(s t) SubClassOf(A ObjectSomeValuesFrom(r B)) \
             SubClassOf(ObjectSomeValuesFrom(t B) C)",
        );
        let d = saturate(&o).unwrap();
        assert!(d.vertex(&Axiom::ri("r", "t")).is_some());
        assert!(entailed_atomic_cis(&o, false).unwrap().contains(&Axiom::atomic("A", "C")));
    }

    #[test]
    fn conjunction_composition() {
        let o = onto(
            "SubClassOf(A B) SubClassOf(A C) SubClassOf(ObjectIntersectionOf(B C) D)",
        );
        assert!(entailed_atomic_cis(&o, false).unwrap().contains(&Axiom::atomic("A", "D")));
    }

    #[test]
    fn rejects_alch() {
        let o = onto("SubClassOf(A ObjectComplementOf(B))");
        assert!(saturate(&o).is_err());
    }

    #[test]
    fn tautologies_flag() {
        let o = onto("SubClassOf(A B)");
        let with = entailed_atomic_cis(&o, true).unwrap();
        assert!(with.contains(&Axiom::atomic("A", "A")));
        assert!(!entailed_atomic_cis(&o, false).unwrap().contains(&Axiom::atomic("A", "A")));
    }

    #[test]
    fn deterministic() {
        let o = onto(
            "SubClassOf(A ObjectIntersectionOf(B ObjectSomeValuesFrom(r C))) \
             SubClassOf(ObjectSomeValuesFrom(r C) D) SubClassOf(ObjectIntersectionOf(B D) E)",
        );
        let a = saturate(&o).unwrap();
        let b = saturate(&o).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.edge_set(), b.edge_set());
    }
}

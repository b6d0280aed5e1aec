//! Tableau-based entailment for ALCH.
//!
//! Entailment of `C ⊑ D` is decided by refutation: `C ⊓ ¬D` is tested for
//! satisfiability w.r.t. the TBox. Inclusions with a concept name on the
//! left (or a conjunction containing one) are unfolded lazily; all other
//! inclusions are internalized as `¬L ⊔ R` and added to every node. Without
//! inverse roles a node's successors cannot affect it, so the completion tree
//! is explored depth-first, branching on `⊔` with dependency-directed
//! backjumping, and a node whose initial label is a subset of an ancestor's
//! label is blocked. Results for successor labels are cached per call; a
//! satisfiable result is cached only when no node below was blocked by a
//! node above.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::elh::RoleHierarchy;
use crate::elh::entailed_atomic_cis;
use crate::syntax::{Axiom, ConceptExpr, ConceptName, HasSignature, Ontology, RoleName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableauConfig {
    pub max_nodes: usize,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig { max_nodes: 100_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasonerError {
    #[error("tableau exceeded {0} nodes")]
    ResourceExhausted(usize),
    #[error(transparent)]
    Fragment(#[from] crate::elh::FragmentError),
}

type Id = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bottom,
    Atom(ConceptName),
    NegAtom(ConceptName),
    And(Vec<Id>),
    Or(Vec<Id>),
    Some(RoleName, Id),
    All(RoleName, Id),
}

struct Tbox {
    nodes: Vec<Node>,
    ids: HashMap<Node, Id>,
    unfold: HashMap<ConceptName, Vec<Id>>,
    global: Vec<Id>,
    roles: RoleHierarchy,
}

impl Tbox {
    fn build(axioms: &[Axiom]) -> Tbox {
        let mut t = Tbox {
            nodes: Vec::new(),
            ids: HashMap::new(),
            unfold: HashMap::new(),
            global: Vec::new(),
            roles: RoleHierarchy::from_axioms(axioms),
        };
        for a in axioms {
            let Axiom::ConceptInclusion { lhs, rhs } = a else { continue };
            match lhs {
                ConceptExpr::Bottom => {}
                ConceptExpr::Top => {
                    let r = t.add(&rhs.nnf(false));
                    t.global.push(r);
                }
                ConceptExpr::Atomic(name) => {
                    let r = t.add(&rhs.nnf(false));
                    t.unfold.entry(name.clone()).or_default().push(r);
                }
                ConceptExpr::And(parts) if parts.iter().any(ConceptExpr::is_atomic) => {
                    // A ⊓ Rest ⊑ R  becomes  A ⊑ ¬Rest ⊔ R
                    let pos = parts.iter().position(ConceptExpr::is_atomic).unwrap();
                    let name = parts[pos].as_atomic().unwrap().clone();
                    let rest = ConceptExpr::and(parts.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, p)| p.clone()));
                    let body = ConceptExpr::or([ConceptExpr::not(rest), rhs.clone()]).nnf(false);
                    let r = t.add(&body);
                    t.unfold.entry(name).or_default().push(r);
                }
                _ => {
                    let body = ConceptExpr::or([ConceptExpr::not(lhs.clone()), rhs.clone()]).nnf(false);
                    let r = t.add(&body);
                    t.global.push(r);
                }
            }
        }
        t
    }

    fn intern(&mut self, n: Node) -> Id {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    /// Interns an NNF concept.
    fn add(&mut self, c: &ConceptExpr) -> Id {
        let n = match c {
            ConceptExpr::Top => Node::Top,
            ConceptExpr::Bottom => Node::Bottom,
            ConceptExpr::Atomic(a) => Node::Atom(a.clone()),
            ConceptExpr::Not(inner) => match inner.as_ref() {
                ConceptExpr::Atomic(a) => Node::NegAtom(a.clone()),
                other => return self.add(&other.nnf(true)),
            },
            ConceptExpr::And(cs) => Node::And(cs.iter().map(|x| self.add(x)).collect()),
            ConceptExpr::Or(cs) => Node::Or(cs.iter().map(|x| self.add(x)).collect()),
            ConceptExpr::Exists(r, f) => {
                let f = self.add(f);
                Node::Some(r.clone(), f)
            }
            ConceptExpr::Forall(r, f) => {
                let f = self.add(f);
                Node::All(r.clone(), f)
            }
        };
        self.intern(n)
    }

    fn complement(&self, id: Id) -> Option<Id> {
        match &self.nodes[id as usize] {
            Node::Atom(a) => self.ids.get(&Node::NegAtom(a.clone())).copied(),
            Node::NegAtom(a) => self.ids.get(&Node::Atom(a.clone())).copied(),
            Node::Top => self.ids.get(&Node::Bottom).copied(),
            Node::Bottom => self.ids.get(&Node::Top).copied(),
            _ => None,
        }
    }
}

/// Branch points a label entry depends on.
type Deps = BTreeSet<u32>;

enum Outcome {
    /// Clash-free; the value is the shallowest ancestor depth that blocked
    /// some node below, or `usize::MAX`.
    Sat(usize),
    /// Every completion clashes; the set names the branch points involved.
    Clash(Deps),
}

struct Run<'a> {
    tbox: &'a Tbox,
    nodes: usize,
    max_nodes: usize,
    branches: u32,
    /// Satisfiability of an initial label, independent of where it occurs.
    cache: HashMap<BTreeSet<Id>, bool>,
}

impl Run<'_> {
    fn sat_node(&mut self, initial: BTreeSet<Id>, ancestors: &mut Vec<BTreeSet<Id>>) -> Result<Outcome, ReasonerError> {
        if let Some(i) = ancestors.iter().position(|a| initial.is_subset(a)) {
            return Ok(Outcome::Sat(i));
        }
        if let Some(&sat) = self.cache.get(&initial) {
            return Ok(if sat { Outcome::Sat(usize::MAX) } else { Outcome::Clash(Deps::new()) });
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(ReasonerError::ResourceExhausted(self.max_nodes));
        }
        let depth = ancestors.len();
        let mut todo: Vec<(Id, Deps)> = initial.iter().map(|&c| (c, Deps::new())).collect();
        todo.extend(self.tbox.global.iter().map(|&c| (c, Deps::new())));
        let out = self.complete(BTreeMap::new(), todo, ancestors)?;
        match &out {
            // Blocking by a node above this one leaves the answer provisional.
            Outcome::Sat(b) if *b < depth => {}
            Outcome::Sat(_) => {
                self.cache.insert(initial, true);
            }
            Outcome::Clash(_) => {
                self.cache.insert(initial, false);
            }
        }
        Ok(match out {
            Outcome::Sat(b) => Outcome::Sat(b),
            Outcome::Clash(_) => Outcome::Clash(Deps::new()),
        })
    }

    fn complete(
        &mut self,
        mut label: BTreeMap<Id, Deps>,
        mut todo: Vec<(Id, Deps)>,
        ancestors: &mut Vec<BTreeSet<Id>>,
    ) -> Result<Outcome, ReasonerError> {
        let tb = self.tbox;
        let clash_with = |label: &BTreeMap<Id, Deps>, c: Id, deps: &Deps| {
            let n = tb.complement(c)?;
            let other = label.get(&n)?;
            Some(deps.union(other).copied().collect::<Deps>())
        };
        while let Some((c, deps)) = todo.pop() {
            if label.contains_key(&c) {
                continue;
            }
            match &tb.nodes[c as usize] {
                Node::Bottom => return Ok(Outcome::Clash(deps)),
                Node::Atom(a) => {
                    if let Some(d) = clash_with(&label, c, &deps) {
                        return Ok(Outcome::Clash(d));
                    }
                    if let Some(us) = tb.unfold.get(a) {
                        todo.extend(us.iter().map(|&u| (u, deps.clone())));
                    }
                }
                Node::NegAtom(_) => {
                    if let Some(d) = clash_with(&label, c, &deps) {
                        return Ok(Outcome::Clash(d));
                    }
                }
                Node::And(cs) => todo.extend(cs.iter().map(|&x| (x, deps.clone()))),
                Node::Top | Node::Or(_) | Node::Some(..) | Node::All(..) => {}
            }
            label.insert(c, deps);
        }

        let open_or = label.iter().find_map(|(&c, deps)| match &tb.nodes[c as usize] {
            Node::Or(ds) if !ds.iter().any(|d| label.contains_key(d)) => Some((ds.clone(), deps.clone())),
            _ => None,
        });
        if let Some((disjuncts, deps)) = open_or {
            let bp = self.branches;
            self.branches += 1;
            let mut acc = deps.clone();
            for d in disjuncts {
                if let Some(ds) = clash_with(&label, d, &deps) {
                    acc.extend(ds);
                    continue;
                }
                let mut with_bp = deps.clone();
                with_bp.insert(bp);
                match self.complete(label.clone(), vec![(d, with_bp)], ancestors)? {
                    Outcome::Sat(b) => return Ok(Outcome::Sat(b)),
                    Outcome::Clash(ds) if !ds.contains(&bp) => return Ok(Outcome::Clash(ds)),
                    Outcome::Clash(ds) => acc.extend(ds.into_iter().filter(|&x| x != bp)),
                }
            }
            return Ok(Outcome::Clash(acc));
        }

        let successors: Vec<(BTreeSet<Id>, Deps)> = label
            .iter()
            .filter_map(|(&c, deps)| match &tb.nodes[c as usize] {
                Node::Some(r, f) => {
                    let mut succ = BTreeSet::from([*f]);
                    let mut sd = deps.clone();
                    for (&g, gd) in &label {
                        if let Node::All(s, h) = &tb.nodes[g as usize] {
                            if tb.roles.is_sub(r, s) {
                                succ.insert(*h);
                                sd.extend(gd.iter().copied());
                            }
                        }
                    }
                    Some((succ, sd))
                }
                _ => None,
            })
            .collect();
        ancestors.push(label.into_keys().collect());
        let mut out = Outcome::Sat(usize::MAX);
        for (succ, deps) in successors {
            match self.sat_node(succ, ancestors)? {
                Outcome::Sat(b) => {
                    if let Outcome::Sat(m) = &mut out {
                        *m = (*m).min(b);
                    }
                }
                Outcome::Clash(_) => {
                    out = Outcome::Clash(deps);
                    break;
                }
            }
        }
        ancestors.pop();
        Ok(out)
    }
}

/// Satisfiability of `c` w.r.t. the concept and role inclusions in `axioms`.
pub fn is_satisfiable(axioms: &[Axiom], c: &ConceptExpr, cfg: TableauConfig) -> Result<bool, ReasonerError> {
    let mut tbox = Tbox::build(axioms);
    let root = tbox.add(&c.nnf(false));
    let mut run = Run { tbox: &tbox, nodes: 0, max_nodes: cfg.max_nodes, branches: 0, cache: HashMap::new() };
    Ok(matches!(run.sat_node(BTreeSet::from([root]), &mut Vec::new())?, Outcome::Sat(_)))
}

/// Decides `axioms ⊨ goal`.
pub fn entails(axioms: &[Axiom], goal: &Axiom, cfg: TableauConfig) -> Result<bool, ReasonerError> {
    match goal {
        Axiom::RoleInclusion { sub, sup } => Ok(RoleHierarchy::from_axioms(axioms).is_sub(sub, sup)),
        Axiom::ConceptInclusion { lhs, rhs } => {
            let probe = ConceptExpr::and([lhs.clone(), ConceptExpr::not(rhs.clone())]);
            Ok(!is_satisfiable(axioms, &probe, cfg)?)
        }
    }
}

/// Nontrivial atomic CIs between concept names of `o`, sorted. ELH inputs
/// are saturated; anything else is checked pairwise.
pub fn classify(o: &Ontology, cfg: TableauConfig) -> Result<Vec<Axiom>, ReasonerError> {
    if o.iter().all(Axiom::is_elh) {
        return Ok(entailed_atomic_cis(o, false)?);
    }
    let names: Vec<ConceptName> = o.signature().concepts.into_iter().collect();
    let mut out = Vec::new();
    for a in &names {
        for b in names.iter().filter(|b| *b != a) {
            let goal = Axiom::ci(ConceptExpr::Atomic(a.clone()), ConceptExpr::Atomic(b.clone()));
            if entails(o.axioms(), &goal, cfg)? {
                out.push(goal);
            }
        }
    }
    out.sort();
    Ok(out)
}

//! ELH subsumption by building the canonical model.
//!
//! There is one element per concept name and per existential filler. Each
//! element carries the set of subexpressions of the ontology it belongs to,
//! grown by naive fixpoint iteration until nothing changes. `A ⊑ B` holds
//! iff `B` labels the element of `A`.

use std::collections::{BTreeMap, BTreeSet};

use dlproof_core::{Axiom, ConceptExpr, ConceptName, HasSignature, Ontology, RoleName};

fn subexpressions(c: &ConceptExpr, out: &mut BTreeSet<ConceptExpr>) {
    out.insert(c.clone());
    match c {
        ConceptExpr::And(cs) => cs.iter().for_each(|d| subexpressions(d, out)),
        ConceptExpr::Exists(_, f) => subexpressions(f, out),
        _ => {}
    }
}

/// Reflexive-transitive closure of the told role inclusions, as a map from
/// a role to all its super-roles.
fn role_closure(o: &Ontology) -> BTreeMap<RoleName, BTreeSet<RoleName>> {
    let mut up: BTreeMap<RoleName, BTreeSet<RoleName>> = BTreeMap::new();
    for r in o.signature().roles {
        up.entry(r.clone()).or_default().insert(r);
    }
    loop {
        let mut changed = false;
        for a in o.iter() {
            let Axiom::RoleInclusion { sub, sup } = a else { continue };
            let above: Vec<RoleName> = up[sup].iter().cloned().collect();
            for (_, supers) in up.iter_mut().filter(|(_, s)| s.contains(sub)) {
                for s in &above {
                    changed |= supers.insert(s.clone());
                }
            }
        }
        if !changed {
            return up;
        }
    }
}

/// All nontrivial `A ⊑ B` between concept names of `o`.
pub fn subsumptions(o: &Ontology) -> BTreeSet<Axiom> {
    subsumptions_over(o, &o.signature().concepts)
}

/// Whether `o ⊨ goal` for an atomic goal whose names need not occur in `o`.
pub fn entails(o: &Ontology, goal: &Axiom) -> bool {
    let (a, b) = goal.atomic_parts().expect("atomic goal");
    a == b || subsumptions_over(o, &BTreeSet::from([a.clone(), b.clone()])).contains(goal)
}

fn subsumptions_over(o: &Ontology, extra: &BTreeSet<ConceptName>) -> BTreeSet<Axiom> {
    let mut sub = BTreeSet::new();
    sub.insert(ConceptExpr::Top);
    let mut cis = Vec::new();
    for a in o.iter() {
        if let Axiom::ConceptInclusion { lhs, rhs } = a {
            subexpressions(lhs, &mut sub);
            subexpressions(rhs, &mut sub);
            cis.push((lhs.clone(), rhs.clone()));
        }
    }
    let mut all = o.signature().concepts;
    all.extend(extra.iter().cloned());
    let names: Vec<ConceptExpr> = all.into_iter().map(ConceptExpr::Atomic).collect();
    sub.extend(names.iter().cloned());
    let up = role_closure(o);

    let mut elements: BTreeSet<ConceptExpr> = names.iter().cloned().collect();
    for c in &sub {
        if let ConceptExpr::Exists(_, f) = c {
            elements.insert((**f).clone());
        }
    }
    let mut label: BTreeMap<ConceptExpr, BTreeSet<ConceptExpr>> =
        elements.iter().map(|e| (e.clone(), BTreeSet::from([e.clone(), ConceptExpr::Top]))).collect();
    let mut edges: BTreeSet<(ConceptExpr, RoleName, ConceptExpr)> = BTreeSet::new();

    loop {
        let mut changed = false;
        for e in &elements {
            let current: Vec<ConceptExpr> = label[e].iter().cloned().collect();
            let mut add: Vec<ConceptExpr> = Vec::new();
            for c in &current {
                for (lhs, rhs) in &cis {
                    if lhs == c {
                        add.push(rhs.clone());
                    }
                }
                match c {
                    ConceptExpr::And(cs) => add.extend(cs.iter().cloned()),
                    ConceptExpr::Exists(r, f) => {
                        changed |= edges.insert((e.clone(), r.clone(), (**f).clone()));
                    }
                    _ => {}
                }
            }
            for c in &sub {
                if let ConceptExpr::And(cs) = c {
                    if cs.iter().all(|d| label[e].contains(d)) {
                        add.push(c.clone());
                    }
                }
            }
            for (_, r, f) in edges.iter().filter(|(from, _, _)| from == e) {
                for c in &sub {
                    if let ConceptExpr::Exists(s, g) = c {
                        if up[r].contains(s) && label[f].contains(&**g) {
                            add.push(c.clone());
                        }
                    }
                }
            }
            let l = label.get_mut(e).unwrap();
            for c in add {
                changed |= l.insert(c);
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = BTreeSet::new();
    for a in &names {
        for b in &names {
            if a != b && label[a].contains(b) {
                out.insert(Axiom::ci(a.clone(), b.clone()));
            }
        }
    }
    out
}

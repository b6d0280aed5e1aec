//! Minimal proofs over a derivation structure by a Dijkstra-like search on
//! the hypergraph (Knuth's generalization to monotone superior functions).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use super::{Measure, Proof, ProofTree};
use crate::derivation::{DerivationStructure, InferenceRule, VertexId};
use crate::render::functional;
use crate::syntax::{Axiom, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0} is not derivable")]
pub struct NotDerivable(pub String);

#[derive(Clone, Debug)]
enum Best {
    Leaf { known: bool },
    Edge(usize),
}

/// A tree proof of `goal` with minimal `m` among all tree proofs in `d`
/// whose leaves are asserted axioms or vertices covered by `known`.
pub fn extract_optimal_proof(
    d: &DerivationStructure,
    goal: &Axiom,
    m: Measure,
    known: &Signature,
) -> Result<Proof, NotDerivable> {
    let not_derivable = || NotDerivable(functional(goal));
    let target = d.vertex(goal).ok_or_else(not_derivable)?;
    let n = d.len();
    let keys: Vec<String> = d.vertices().iter().map(functional).collect();
    let mut cost: Vec<Option<u64>> = vec![None; n];
    let mut best: Vec<Option<Best>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();

    for (v, a) in d.vertices().iter().enumerate() {
        let asserted = d.is_asserted(v);
        let sig = Signature::of(a);
        let is_known = !sig.is_empty() && sig.is_subset(known);
        if asserted || is_known {
            let c = m.combine(a, &[]);
            cost[v] = Some(c);
            best[v] = Some(Best::Leaf { known: !asserted });
            heap.push(Reverse((c, keys[v].clone(), v)));
        }
    }

    let edges = d.inferences();
    let mut by_premise: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut waiting: Vec<usize> = Vec::with_capacity(edges.len());
    for (e, inf) in edges.iter().enumerate() {
        waiting.push(inf.premises.len());
        for &p in &inf.premises {
            by_premise[p].push(e);
        }
    }

    for e in (0..edges.len()).filter(|&e| waiting[e] == 0) {
        relax(d, m, e, &keys, &done, &mut cost, &mut best, &mut heap);
    }
    while let Some(Reverse((c, _, v))) = heap.pop() {
        if done[v] || cost[v] != Some(c) {
            continue;
        }
        done[v] = true;
        if v == target {
            break;
        }
        for &e in &by_premise[v] {
            waiting[e] -= 1;
            if waiting[e] == 0 {
                relax(d, m, e, &keys, &done, &mut cost, &mut best, &mut heap);
            }
        }
    }
    if !done[target] {
        return Err(not_derivable());
    }
    Ok(Proof::from_tree(&unravel(d, &best, target)))
}

#[allow(clippy::too_many_arguments)]
fn relax(
    d: &DerivationStructure,
    m: Measure,
    e: usize,
    keys: &[String],
    done: &[bool],
    cost: &mut [Option<u64>],
    best: &mut [Option<Best>],
    heap: &mut BinaryHeap<Reverse<(u64, String, VertexId)>>,
) {
    let inf = &d.inferences()[e];
    if inf.rule == InferenceRule::Asserted || done[inf.conclusion] {
        return;
    }
    let children: Vec<u64> = inf.premises.iter().map(|&p| cost[p].expect("finalized")).collect();
    let c = m.combine(d.axiom(inf.conclusion), &children);
    let better = match (cost[inf.conclusion], &best[inf.conclusion]) {
        (None, _) => true,
        (Some(old), Some(Best::Edge(prev))) if old == c => edge_key(d, e) < edge_key(d, *prev),
        (Some(old), _) => c < old,
    };
    if better {
        cost[inf.conclusion] = Some(c);
        best[inf.conclusion] = Some(Best::Edge(e));
        heap.push(Reverse((c, keys[inf.conclusion].clone(), inf.conclusion)));
    }
}

fn edge_key(d: &DerivationStructure, e: usize) -> (String, Vec<String>) {
    let inf = &d.inferences()[e];
    let mut ps: Vec<String> = inf.premises.iter().map(|&p| functional(d.axiom(p))).collect();
    ps.sort();
    (inf.rule.id(), ps)
}

fn unravel(d: &DerivationStructure, best: &[Option<Best>], v: VertexId) -> ProofTree {
    let axiom = d.axiom(v).clone();
    match best[v].as_ref().expect("finalized vertex has a derivation") {
        Best::Leaf { known } => ProofTree::Leaf { axiom, known: *known },
        Best::Edge(e) => {
            let inf = &d.inferences()[*e];
            ProofTree::Node {
                axiom,
                rule: inf.rule.clone(),
                premises: inf.premises.iter().map(|&p| unravel(d, best, p)).collect(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elh::saturate;
    use crate::parse::parse_ontology;
    use crate::proof::{evaluate_measure, validate, VertexKind};

    fn prove(text: &str, goal: Axiom, m: Measure, known: &Signature) -> Proof {
        let o = parse_ontology(text).unwrap();
        let d = saturate(&o).unwrap();
        let p = extract_optimal_proof(&d, &goal, m, known).unwrap();
        validate(&p, &o, &goal, known).unwrap();
        p
    }

    #[test]
    fn chain_proof() {
        let p = prove("SubClassOf(A B) SubClassOf(B C)", Axiom::atomic("A", "C"), Measure::TreeSize, &Signature::new());
        assert_eq!(evaluate_measure(&p, Measure::TreeSize), 3);
        assert_eq!(p.steps[0].rule, InferenceRule::Hier);
    }

    #[test]
    fn known_signature_condenses() {
        let sig = Signature::from_concepts(["A", "B", "C"]);
        let p = prove("SubClassOf(A B) SubClassOf(B C)", Axiom::atomic("A", "C"), Measure::TreeSize, &sig);
        assert_eq!(p.len(), 1);
        assert_eq!(p.root().kind, VertexKind::Known);
    }

    #[test]
    fn direct_axiom_beats_chain() {
        let p = prove(
            "SubClassOf(A B) SubClassOf(B C) SubClassOf(C D) SubClassOf(A D)",
            Axiom::atomic("A", "D"),
            Measure::TreeSize,
            &Signature::new(),
        );
        assert_eq!(evaluate_measure(&p, Measure::TreeSize), 1);
    }

    #[test]
    fn unreachable_goal() {
        let o = parse_ontology("SubClassOf(A B)").unwrap();
        let d = saturate(&o).unwrap();
        assert!(extract_optimal_proof(&d, &Axiom::atomic("B", "A"), Measure::Depth, &Signature::new()).is_err());
    }
}

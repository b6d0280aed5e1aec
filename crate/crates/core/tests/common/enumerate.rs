//! Exhaustive minimum over all tree proofs in a derivation structure, and a
//! generator of random structures to run it on.

use dlproof_core::proof::Measure;
use dlproof_core::{Axiom, ConceptExpr, DerivationStructure, HasSignature, InferenceRule, Signature, VertexId};
use rand::Rng;

/// Minimum of `m` over every tree proof of `goal`. A vertex never repeats
/// on a branch, which loses nothing for monotone measures.
pub fn min_measure(d: &DerivationStructure, goal: VertexId, m: Measure, known: &Signature) -> Option<u64> {
    fn best(d: &DerivationStructure, v: VertexId, m: Measure, known: &Signature, path: &mut Vec<bool>) -> Option<u64> {
        let a = d.axiom(v);
        let sig = a.signature();
        let leaf = d.is_asserted(v) || (!sig.is_empty() && sig.is_subset(known));
        let mut out = leaf.then(|| m.combine(a, &[]));
        path[v] = true;
        for inf in d.inferences_for(v) {
            if inf.rule == InferenceRule::Asserted || inf.premises.iter().any(|&p| path[p]) {
                continue;
            }
            let children: Option<Vec<u64>> = inf.premises.iter().map(|&p| best(d, p, m, known, path)).collect();
            if let Some(cs) = children {
                let c = m.combine(a, &cs);
                out = Some(out.map_or(c, |o: u64| o.min(c)));
            }
        }
        path[v] = false;
        out
    }
    best(d, goal, m, known, &mut vec![false; d.len()])
}

const RULES: [InferenceRule; 4] = [InferenceRule::Hier, InferenceRule::AndMinus, InferenceRule::AndPlus, InferenceRule::Exists];

/// Up to `max_derived` unasserted vertices plus a few asserted ones, with
/// random hyperedges of arity 0 to 3. Vertex labels vary in weight.
pub fn random_structure<R: Rng>(rng: &mut R, max_derived: usize) -> DerivationStructure {
    let derived = rng.gen_range(1..=max_derived);
    let asserted = rng.gen_range(1..=4);
    let label = |i: usize, rng: &mut R| {
        let extra = rng.gen_range(0..3);
        let rhs = if extra == 0 {
            ConceptExpr::atom(&format!("B{i}"))
        } else {
            ConceptExpr::and((0..=extra).map(|k| ConceptExpr::atom(&format!("B{i}x{k}"))))
        };
        Axiom::ci(ConceptExpr::atom(&format!("A{}", i % 3)), rhs)
    };
    let mut d = DerivationStructure::new();
    let axioms: Vec<Axiom> = (0..derived + asserted).map(|i| label(i, rng)).collect();
    for a in &axioms[derived..] {
        d.assert_axiom(a.clone());
    }
    for a in &axioms[..derived] {
        d.add_vertex(a.clone());
    }
    let edges = rng.gen_range(derived..=3 * derived + 2);
    for _ in 0..edges {
        let c = rng.gen_range(0..axioms.len());
        let arity = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(1..=3) };
        let premises: Vec<Axiom> = (0..arity).map(|_| axioms[rng.gen_range(0..axioms.len())].clone()).collect();
        let rule = RULES[rng.gen_range(0..RULES.len())].clone();
        d.add_inference(premises, axioms[c].clone(), rule);
    }
    d
}

//! Test-side oracles. None of them reuse the library's reasoning code for
//! the property they check.
#![allow(dead_code)]

pub mod canonical;
pub mod enumerate;
pub mod models;

use dlproof_core::forget::{forget, ForgettingResult};
use dlproof_core::justify::{one_justification, ElOracle};
use dlproof_core::{parse_axiom, parse_ontology, Axiom, HasSignature, Ontology, Symbol};
use std::time::Duration;

pub struct Fixture {
    pub name: String,
    pub goal: Axiom,
    pub ontology: Ontology,
}

/// The hand-written ALCH pattern corpus.
pub fn alch_corpus() -> Vec<Fixture> {
    let text = include_str!("../fixtures/alch_patterns.txt");
    let mut out = Vec::new();
    for block in text.split("\n\n") {
        let lines: Vec<&str> = block.lines().filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty()).collect();
        let Some(first) = lines.first() else { continue };
        let goal = parse_axiom(first.strip_prefix("goal ").expect("block starts with a goal")).unwrap();
        let name = format!("f{:02}", out.len());
        let mut ontology = parse_ontology(&lines[1..].join("\n")).unwrap();
        ontology.set_name(name.clone());
        out.push(Fixture { name, goal, ontology });
    }
    out
}

/// Concept names other than the goal's that occur in `o`.
pub fn forgettable_concepts(o: &Ontology, goal: &Axiom) -> Vec<Symbol> {
    let (a, b) = goal.atomic_parts().unwrap();
    o.signature()
        .concepts
        .into_iter()
        .filter(|c| c != a && c != b)
        .map(Symbol::Concept)
        .collect()
}

/// Fewest concept names forgotten over every elimination order, where a
/// branch ends once no remaining concept name can be forgotten.
pub fn brute_force_symb(o: &Ontology, goal: &Axiom, timeout: Duration) -> usize {
    let j0 = one_justification(o, goal, &ElOracle::default()).unwrap().to_ontology();
    fn go(j: &Ontology, goal: &Axiom, timeout: Duration) -> usize {
        let mut best: Option<usize> = None;
        for x in forgettable_concepts(j, goal) {
            let ForgettingResult::Success(r) = forget(j, &x, timeout) else { continue };
            let Ok(next) = one_justification(&r, goal, &ElOracle::default()) else { continue };
            let v = 1 + go(&next.to_ontology(), goal, timeout);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        best.unwrap_or(0)
    }
    go(&j0, goal, timeout)
}

//! SYMB: branch-and-bound over elimination orders of concept names,
//! minimizing the number of names forgotten. Children are tried by the
//! number of names they leave; role names left at the end are forgotten as
//! in HEUR.

use std::collections::HashMap;

use super::{heuristic_steps, sequence_proof, Ctx, FbpError, FbpTask, FbpTrace, TraceStep};
use crate::proof::Proof;
use crate::syntax::{Ontology, Signature, Symbol};

#[derive(Default)]
struct Search {
    best: Option<(Vec<Ontology>, Vec<Symbol>)>,
    seen: HashMap<String, usize>,
}

pub fn symb_proof(task: &FbpTask) -> Result<(Proof, FbpTrace), FbpError> {
    let mut ctx = Ctx::new(task)?;
    ctx.check_budget()?;
    let j0 = Ontology::from_axioms("", ctx.justify(&task.ontology, &task.goal)?);
    let mut search = Search::default();
    explore(&mut ctx, &mut vec![j0], &mut Vec::new(), &mut search)?;
    let (mut states, mut names) = search.best.expect("the root is always a terminal or has one below it");
    let mut trace: Vec<TraceStep> = names
        .iter()
        .enumerate()
        .map(|(i, x)| TraceStep { forgotten: x.clone(), before: states[i].clone(), after: Some(states[i + 1].clone()) })
        .collect();
    let last = states.last().expect("non-empty");
    let pool = Signature::of(last).symbols().filter(|s| matches!(s, Symbol::Role(_))).collect();
    heuristic_steps(&mut ctx, &mut states, &mut names, &mut trace, pool)?;
    let tree = sequence_proof(&mut ctx, &states, &names)?;
    Ok(ctx.finish(trace, Proof::from_tree(&tree)))
}

fn explore(ctx: &mut Ctx, states: &mut Vec<Ontology>, names: &mut Vec<Symbol>, s: &mut Search) -> Result<(), FbpError> {
    ctx.check_budget()?;
    let depth = names.len();
    if matches!(&s.best, Some((_, b)) if depth >= b.len()) {
        return Ok(());
    }
    let j = states.last().expect("non-empty").clone();
    let key = j.canonical_key();
    if matches!(s.seen.get(&key), Some(&d) if d <= depth) {
        return Ok(());
    }
    s.seen.insert(key, depth);

    let mut children = Vec::new();
    for x in ctx.candidates(&j, true) {
        if let Some(next) = ctx.step(&j, &x)? {
            let left = ctx.candidates(&next, true).len();
            children.push((left, x, next));
        }
    }
    if children.is_empty() {
        s.best = Some((states.clone(), names.clone()));
        return Ok(());
    }
    children.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    for (_, x, next) in children {
        states.push(next);
        names.push(x);
        explore(ctx, states, names, s)?;
        states.pop();
        names.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::FbpMethod;
    use super::*;
    use crate::parse::parse_ontology;
    use crate::syntax::Axiom;

    #[test]
    fn chain_needs_both_names() {
        // Both intermediate names of the chain have to go.
        let o = parse_ontology("SubClassOf(A B) SubClassOf(B D) SubClassOf(D C)").unwrap();
        let (p, trace) = symb_proof(&FbpTask::new(o, Axiom::atomic("A", "C"), FbpMethod::Symb)).unwrap();
        assert_eq!(p.goal(), &Axiom::atomic("A", "C"));
        assert_eq!(trace.forgotten_concepts(), 2);
    }
}

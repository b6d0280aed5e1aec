//! SIZE and SIZE_WEIGHTED: depth-first search over elimination orders with
//! a shrinking bound on the size of the final proof.
//!
//! `prove(J, n)` returns the smallest proof of size at most `n` it finds.
//! The bound passed to a child `J'` is `n - m` where `m` measures `J \ J'`;
//! children are visited by `size(J') × |sig(J')|`. A set in which no concept
//! name can be forgotten any more yields a single step from the set itself.

use std::collections::HashMap;

use super::{Ctx, FbpError, FbpMethod, FbpTask, FbpTrace, TraceStep};
use crate::derivation::InferenceRule;
use crate::proof::{evaluate_tree, Measure, Proof, ProofTree};
use crate::syntax::{Axiom, Ontology, Signature, Symbol};

#[derive(Clone)]
struct Found {
    tree: ProofTree,
    cost: u64,
    path: Vec<TraceStep>,
}

enum Memo {
    Found(Found),
    Failed(i64),
}

struct Search {
    m: Measure,
    memo: HashMap<(String, Option<Symbol>), Memo>,
}

impl Search {
    fn size_of(&self, axioms: &[Axiom]) -> u64 {
        axioms.iter().map(|a| self.m.combine(a, &[])).sum()
    }
}

pub fn size_proof(task: &FbpTask) -> Result<(Proof, FbpTrace), FbpError> {
    let mut ctx = Ctx::new(task)?;
    ctx.check_budget()?;
    let m = match task.method {
        FbpMethod::SizeWeighted => Measure::WeightedSize,
        _ => Measure::TreeSize,
    };
    let j0 = Ontology::from_axioms("", ctx.justify(&task.ontology, &task.goal)?);
    let mut search = Search { m, memo: HashMap::new() };
    let bound = i64::try_from(task.size_bound).unwrap_or(i64::MAX);
    let found = prove(&mut ctx, &mut search, &j0, bound, None)?.ok_or(FbpError::NoProofWithinBound)?;
    Ok(ctx.finish(found.path, Proof::from_tree(&found.tree)))
}

fn prove(ctx: &mut Ctx, s: &mut Search, j: &Ontology, n: i64, via: Option<Symbol>) -> Result<Option<Found>, FbpError> {
    if n <= 0 {
        return Ok(None);
    }
    ctx.check_budget()?;
    let key = (j.canonical_key(), via.clone());
    match s.memo.get(&key) {
        Some(Memo::Found(f)) => return Ok((f.cost as i64 <= n).then(|| f.clone())),
        Some(Memo::Failed(b)) if n <= *b => return Ok(None),
        _ => {}
    }
    let out = search_here(ctx, s, j, n, via)?;
    s.memo.insert(key, out.clone().map_or(Memo::Failed(n), Memo::Found));
    Ok(out)
}

fn search_here(ctx: &mut Ctx, s: &mut Search, j: &Ontology, mut n: i64, via: Option<Symbol>) -> Result<Option<Found>, FbpError> {
    let goal = ctx.goal.clone();
    if j.contains(&goal) {
        let cost = s.m.combine(&goal, &[]);
        return Ok((cost as i64 <= n).then(|| Found { tree: ProofTree::asserted(goal), cost, path: Vec::new() }));
    }

    let mut children = Vec::new();
    for x in ctx.candidates(j, true) {
        if let Some(next) = ctx.step(j, &x)? {
            let removed: Vec<Axiom> = j.iter().filter(|a| !next.contains(a)).cloned().collect();
            let order = s.size_of(next.axioms()) * Signature::of(&next).len() as u64;
            children.push((order, x, s.size_of(&removed), next));
        }
    }

    if children.is_empty() {
        let leaves: Vec<ProofTree> = j.iter().cloned().map(ProofTree::asserted).collect();
        let costs: Vec<u64> = j.iter().map(|a| s.m.combine(a, &[])).collect();
        let cost = s.m.combine(&goal, &costs);
        let rule = via.map_or(InferenceRule::Entailment, InferenceRule::Forget);
        let tree = ProofTree::Node { axiom: goal, rule, premises: leaves };
        return Ok((cost as i64 <= n).then_some(Found { tree, cost, path: Vec::new() }));
    }

    children.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut best: Option<Found> = None;
    for (_, x, m, next) in children {
        let Some(sub) = prove(ctx, s, &next, n - m as i64, Some(x.clone()))? else { continue };
        let tree = extend(ctx, &sub.tree, j, &x)?;
        let cost = evaluate_tree(&tree, s.m);
        if cost as i64 > n || best.as_ref().is_some_and(|b| cost >= b.cost) {
            continue;
        }
        let mut path = vec![TraceStep { forgotten: x, before: j.clone(), after: Some(next) }];
        path.extend(sub.path);
        n = cost as i64;
        best = Some(Found { tree, cost, path });
    }
    Ok(best)
}

/// Replaces every leaf of `t` that is not in `j` by a `Forget(x)` step from
/// its justification in `j`.
fn extend(ctx: &mut Ctx, t: &ProofTree, j: &Ontology, x: &Symbol) -> Result<ProofTree, FbpError> {
    Ok(match t {
        ProofTree::Leaf { axiom, .. } if j.contains(axiom) => t.clone(),
        ProofTree::Leaf { axiom, .. } => {
            let premises = ctx.justify(j, axiom)?.into_iter().map(ProofTree::asserted).collect();
            ProofTree::Node { axiom: axiom.clone(), rule: InferenceRule::Forget(x.clone()), premises }
        }
        ProofTree::Node { axiom, rule, premises } => ProofTree::Node {
            axiom: axiom.clone(),
            rule: rule.clone(),
            premises: premises.iter().map(|p| extend(ctx, p, j, x)).collect::<Result<_, _>>()?,
        },
    })
}

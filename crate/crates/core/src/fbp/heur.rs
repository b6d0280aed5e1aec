//! HEUR: forget the least frequent name of the current justification until
//! only the goal's names are left or every remaining name was tried.

use super::{heuristic_steps, sequence_proof, Ctx, FbpError, FbpTask, FbpTrace};
use crate::proof::Proof;
use crate::syntax::{Ontology, Signature};

pub fn heur_proof(task: &FbpTask) -> Result<(Proof, FbpTrace), FbpError> {
    let mut ctx = Ctx::new(task)?;
    ctx.check_budget()?;
    let j0 = ctx.justify(&task.ontology, &task.goal)?;
    let mut states = vec![Ontology::from_axioms("", j0)];
    let mut names = Vec::new();
    let mut trace = Vec::new();
    let pool = Signature::of(&task.ontology).symbols().collect();
    heuristic_steps(&mut ctx, &mut states, &mut names, &mut trace, pool)?;
    let tree = sequence_proof(&mut ctx, &states, &names)?;
    Ok(ctx.finish(trace, Proof::from_tree(&tree)))
}

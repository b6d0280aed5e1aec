//! Black-box extraction of a single subset-minimal justification.

use thiserror::Error;

use crate::elh;
use crate::syntax::{Axiom, ConceptExpr, HasSignature, Ontology};
use crate::tableau::{self, ReasonerError, TableauConfig};

/// Something that decides `axioms ⊨ goal`.
pub trait EntailmentOracle: Sync {
    fn entails(&self, axioms: &[Axiom], goal: &Axiom) -> Result<bool, ReasonerError>;
}

/// The ALCH tableau.
#[derive(Clone, Copy, Debug, Default)]
pub struct TableauOracle(pub TableauConfig);

impl EntailmentOracle for TableauOracle {
    fn entails(&self, axioms: &[Axiom], goal: &Axiom) -> Result<bool, ReasonerError> {
        tableau::entails(axioms, goal, self.0)
    }
}

/// Saturation-based classification for ELH inputs with atomic goals; falls
/// back to the tableau otherwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct ElOracle(pub TableauConfig);

impl EntailmentOracle for ElOracle {
    fn entails(&self, axioms: &[Axiom], goal: &Axiom) -> Result<bool, ReasonerError> {
        if goal.is_tautology() {
            return Ok(true);
        }
        if goal.is_atomic_ci() && axioms.iter().all(Axiom::is_elh) {
            let o = Ontology::from_axioms("", axioms.iter().cloned());
            let d = elh::saturate(&o)?;
            let Axiom::ConceptInclusion { lhs, rhs } = goal else { unreachable!() };
            // A name the axioms never mention is subsumed only by what ⊤ is.
            let fresh = lhs.as_atomic().is_some_and(|a| !o.signature().concepts.contains(a));
            let probe = if fresh { Axiom::ci(ConceptExpr::Top, rhs.clone()) } else { goal.clone() };
            return Ok(d.vertex(&probe).is_some());
        }
        tableau::entails(axioms, goal, self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub goal: Axiom,
    /// In the order of the source ontology.
    pub axioms: Vec<Axiom>,
}

impl Justification {
    pub fn to_ontology(&self) -> Ontology {
        Ontology::from_axioms("", self.axioms.iter().cloned())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JustifyError {
    #[error("goal is not entailed")]
    NotEntailed,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

/// Removes axioms one at a time, in ontology order, whenever the rest still
/// entails the goal.
pub fn one_justification(
    o: &Ontology,
    goal: &Axiom,
    oracle: &dyn EntailmentOracle,
) -> Result<Justification, JustifyError> {
    let mut keep: Vec<Axiom> = o.axioms().to_vec();
    if !oracle.entails(&keep, goal)? {
        return Err(JustifyError::NotEntailed);
    }
    let mut i = 0;
    while i < keep.len() {
        let removed = keep.remove(i);
        if oracle.entails(&keep, goal)? {
            continue;
        }
        keep.insert(i, removed);
        i += 1;
    }
    Ok(Justification { goal: goal.clone(), axioms: keep })
}

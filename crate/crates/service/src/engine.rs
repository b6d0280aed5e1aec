//! Proof generation shared by the HTTP handlers and the command line.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use dlproof_core::elh::saturate;
use dlproof_core::fbp::{self, FbpError, FbpMethod, FbpTask};
use dlproof_core::proof::{extract_optimal_proof, Measure, Proof};
use dlproof_core::{Axiom, ConceptName, DerivationStructure, Fragment, HasSignature, Ontology, RoleName, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ElkMinimal,
    Fbp(FbpMethod),
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ElkMinimal => "elk-minimal",
            Method::Fbp(m) => m.as_str(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "elk-minimal" | "elk" => Ok(Method::ElkMinimal),
            other => other.parse().map(Method::Fbp),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProofRequest {
    pub goal: Axiom,
    pub method: Method,
    pub measure: Measure,
    pub known: Signature,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    NotEntailed(String),
    /// The method cannot handle this ontology or goal.
    Unsupported(String),
    BudgetExceeded,
    Internal(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::NotEntailed(g) => write!(f, "{g} is not entailed"),
            EngineError::Unsupported(m) => f.write_str(m),
            EngineError::BudgetExceeded => f.write_str("proof search exceeded its budget"),
            EngineError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for EngineError {}

/// Resolves bare names against the ontology: a name used only as a role is
/// a role, anything else a concept. `role:` and `concept:` prefixes force
/// the kind.
pub fn known_signature(o: &Ontology, names: &[String]) -> Signature {
    let sig = o.signature();
    let mut out = Signature::new();
    for raw in names {
        let n = raw.trim();
        if let Some(r) = n.strip_prefix("role:") {
            out.roles.insert(RoleName::new(r.trim()));
        } else if let Some(c) = n.strip_prefix("concept:") {
            out.concepts.insert(ConceptName::new(c.trim()));
        } else if sig.roles.contains(&RoleName::new(n)) && !sig.concepts.contains(&ConceptName::new(n)) {
            out.roles.insert(RoleName::new(n));
        } else if !n.is_empty() {
            out.concepts.insert(ConceptName::new(n));
        }
    }
    out
}

/// Runs one proof request. `saturation` is used for `elk-minimal` when
/// given; otherwise the ontology is saturated here.
pub fn prove(
    o: &Ontology,
    saturation: Option<&DerivationStructure>,
    req: &ProofRequest,
    budget: Duration,
) -> Result<Proof, EngineError> {
    let goal_text = dlproof_core::render::functional(&req.goal);
    match req.method {
        Method::ElkMinimal => {
            if o.fragment() != Fragment::Elh {
                return Err(EngineError::Unsupported(format!(
                    "elk-minimal needs an ELH ontology, this one is {}",
                    o.fragment().as_str()
                )));
            }
            let owned;
            let d = match saturation {
                Some(d) => d,
                None => {
                    owned = saturate(o).map_err(|e| EngineError::Unsupported(e.to_string()))?;
                    &owned
                }
            };
            extract_optimal_proof(d, &req.goal, req.measure, &req.known).map_err(|_| EngineError::NotEntailed(goal_text))
        }
        Method::Fbp(m) => {
            let mut task = FbpTask::new(o.clone(), req.goal.clone(), m);
            task.overall_budget = budget;
            match fbp::run(&task) {
                Ok((p, _)) => Ok(p),
                Err(FbpError::NotEntailed) => Err(EngineError::NotEntailed(goal_text)),
                Err(FbpError::BudgetExceeded) => Err(EngineError::BudgetExceeded),
                Err(e @ (FbpError::InvalidGoal | FbpError::NoProofWithinBound)) => Err(EngineError::Unsupported(e.to_string())),
                Err(FbpError::Reasoner(e)) => Err(EngineError::Internal(e.to_string())),
            }
        }
    }
}

//! Tree-shaped proofs, recursive measures and structural validation.

mod extract;
mod json;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::derivation::InferenceRule;
use crate::justify::EntailmentOracle;
use crate::syntax::{Axiom, HasSignature, Ontology, Signature};
use crate::tableau::ReasonerError;

pub use extract::{extract_optimal_proof, NotDerivable};
pub use json::{validate_proof_json, InferenceDoc, Measures, NodeDoc, ProofDocument};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Asserted,
    Inferred,
    Known,
    Conclusion,
}

impl VertexKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexKind::Asserted => "asserted",
            VertexKind::Inferred => "inferred",
            VertexKind::Known => "known",
            VertexKind::Conclusion => "conclusion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofVertex {
    pub id: String,
    pub axiom: Axiom,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub id: String,
    /// Indices into [`Proof::vertices`].
    pub premises: Vec<usize>,
    pub conclusion: usize,
    pub rule: InferenceRule,
}

/// A proof as a recursive tree, the form produced by the search procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofTree {
    Leaf { axiom: Axiom, known: bool },
    Node { axiom: Axiom, rule: InferenceRule, premises: Vec<ProofTree> },
}

impl ProofTree {
    pub fn asserted(axiom: Axiom) -> Self {
        ProofTree::Leaf { axiom, known: false }
    }

    pub fn axiom(&self) -> &Axiom {
        match self {
            ProofTree::Leaf { axiom, .. } | ProofTree::Node { axiom, .. } => axiom,
        }
    }
}

/// A finite tree proof; vertex 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub vertices: Vec<ProofVertex>,
    pub steps: Vec<ProofStep>,
}

impl Proof {
    /// Flattens a tree, numbering vertices and steps in depth-first order.
    pub fn from_tree(tree: &ProofTree) -> Proof {
        let mut p = Proof { vertices: Vec::new(), steps: Vec::new() };
        p.push(tree, true);
        p
    }

    fn push(&mut self, t: &ProofTree, root: bool) -> usize {
        let v = self.vertices.len();
        let (axiom, kind) = match t {
            ProofTree::Leaf { axiom, known } => {
                (axiom.clone(), if *known { VertexKind::Known } else { VertexKind::Asserted })
            }
            ProofTree::Node { axiom, .. } => {
                (axiom.clone(), if root { VertexKind::Conclusion } else { VertexKind::Inferred })
            }
        };
        self.vertices.push(ProofVertex { id: format!("n{v}"), axiom, kind });
        if let ProofTree::Node { rule, premises, .. } = t {
            let s = self.steps.len();
            self.steps.push(ProofStep { id: format!("i{s}"), premises: Vec::new(), conclusion: v, rule: rule.clone() });
            let ps: Vec<usize> = premises.iter().map(|c| self.push(c, false)).collect();
            self.steps[s].premises = ps;
        }
        v
    }

    pub fn root(&self) -> &ProofVertex {
        &self.vertices[0]
    }

    pub fn goal(&self) -> &Axiom {
        &self.vertices[0].axiom
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn step_for(&self, v: usize) -> Option<&ProofStep> {
        self.steps.iter().find(|s| s.conclusion == v)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ProofVertex> {
        self.vertices.iter().enumerate().filter(|(i, _)| self.step_for(*i).is_none()).map(|(_, v)| v)
    }

    /// Union of the signatures of all vertex labels.
    pub fn signature(&self) -> Signature {
        let mut s = Signature::new();
        for v in &self.vertices {
            v.axiom.collect_signature(&mut s);
        }
        s
    }

    pub fn to_tree(&self) -> ProofTree {
        self.tree_at(0)
    }

    fn tree_at(&self, v: usize) -> ProofTree {
        let axiom = self.vertices[v].axiom.clone();
        match self.step_for(v) {
            None => ProofTree::Leaf { axiom, known: self.vertices[v].kind == VertexKind::Known },
            Some(s) => ProofTree::Node {
                axiom,
                rule: s.rule.clone(),
                premises: s.premises.iter().map(|&p| self.tree_at(p)).collect(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Measure {
    TreeSize,
    Depth,
    WeightedSize,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::TreeSize, Measure::Depth, Measure::WeightedSize];

    /// Cost of a vertex labelled `a` whose premises cost `children`.
    pub fn combine(&self, a: &Axiom, children: &[u64]) -> u64 {
        match self {
            Measure::TreeSize => 1 + children.iter().sum::<u64>(),
            Measure::Depth => children.iter().max().map_or(0, |d| d + 1),
            Measure::WeightedSize => a.weight() + children.iter().sum::<u64>(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::TreeSize => "size",
            Measure::Depth => "depth",
            Measure::WeightedSize => "weighted-size",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown measure `{0}`")]
pub struct UnknownMeasure(pub String);

impl FromStr for Measure {
    type Err = UnknownMeasure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "size" | "tree-size" | "treesize" => Ok(Measure::TreeSize),
            "depth" => Ok(Measure::Depth),
            "weighted-size" | "weightedsize" | "weighted" => Ok(Measure::WeightedSize),
            _ => Err(UnknownMeasure(s.into())),
        }
    }
}

pub fn evaluate_measure(p: &Proof, m: Measure) -> u64 {
    fn at(p: &Proof, v: usize, m: Measure) -> u64 {
        let children: Vec<u64> = match p.step_for(v) {
            Some(s) => s.premises.iter().map(|&c| at(p, c, m)).collect(),
            None => Vec::new(),
        };
        m.combine(&p.vertices[v].axiom, &children)
    }
    at(p, 0, m)
}

pub fn evaluate_tree(t: &ProofTree, m: Measure) -> u64 {
    match t {
        ProofTree::Leaf { axiom, .. } => m.combine(axiom, &[]),
        ProofTree::Node { axiom, premises, .. } => {
            let cs: Vec<u64> = premises.iter().map(|c| evaluate_tree(c, m)).collect();
            m.combine(axiom, &cs)
        }
    }
}

/// `|sig(p) ∩ s| / |sig(p)|`, or 1 for a proof without names.
pub fn signature_coverage(p: &Proof, s: &Signature) -> f64 {
    let sig = p.signature();
    if sig.is_empty() {
        return 1.0;
    }
    sig.intersection(s).len() as f64 / sig.len() as f64
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvalidProof {
    #[error("proof has no vertices")]
    Empty,
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("vertex {0} is the conclusion of several steps")]
    SeveralDerivations(String),
    #[error("vertex {0} is a premise of {1} steps")]
    NotTreeShaped(String, usize),
    #[error("vertex {0} is not connected to the root")]
    Disconnected(String),
    #[error("vertex {id} has kind {kind} but {reason}")]
    WrongKind { id: String, kind: &'static str, reason: &'static str },
    #[error("leaf {0} is not an axiom of the ontology")]
    LeafNotAsserted(String),
    #[error("known leaf {0} uses names outside the known signature")]
    KnownOutsideSignature(String),
    #[error("root is {found}, expected {expected}")]
    WrongRoot { found: String, expected: String },
}

/// Checks tree shape and vertex kinds.
pub fn validate_structure(p: &Proof) -> Result<(), InvalidProof> {
    if p.vertices.is_empty() {
        return Err(InvalidProof::Empty);
    }
    let mut ids = BTreeSet::new();
    for id in p.vertices.iter().map(|v| &v.id).chain(p.steps.iter().map(|s| &s.id)) {
        if !ids.insert(id) {
            return Err(InvalidProof::DuplicateId(id.clone()));
        }
    }
    let n = p.vertices.len();
    let mut derived = vec![0usize; n];
    let mut used = vec![0usize; n];
    for s in &p.steps {
        derived[s.conclusion] += 1;
        for &q in &s.premises {
            used[q] += 1;
        }
    }
    for (i, v) in p.vertices.iter().enumerate() {
        if derived[i] > 1 {
            return Err(InvalidProof::SeveralDerivations(v.id.clone()));
        }
        let expected_uses = usize::from(i != 0);
        if used[i] != expected_uses {
            return Err(InvalidProof::NotTreeShaped(v.id.clone(), used[i]));
        }
        let leaf = derived[i] == 0;
        let ok = match v.kind {
            VertexKind::Asserted | VertexKind::Known => leaf,
            VertexKind::Inferred => !leaf && i != 0,
            VertexKind::Conclusion => !leaf && i == 0,
        };
        if !ok {
            let reason = if leaf { "is a leaf" } else { "is derived" };
            return Err(InvalidProof::WrongKind { id: v.id.clone(), kind: v.kind.as_str(), reason });
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        if let Some(s) = p.step_for(v) {
            stack.extend(s.premises.iter().copied());
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(InvalidProof::Disconnected(p.vertices[i].id.clone()));
    }
    Ok(())
}

/// Structure plus the root/leaf contract against an ontology and known
/// signature.
pub fn validate(p: &Proof, o: &Ontology, goal: &Axiom, known: &Signature) -> Result<(), InvalidProof> {
    validate_structure(p)?;
    if p.goal() != goal {
        return Err(InvalidProof::WrongRoot { found: p.goal().to_string(), expected: goal.to_string() });
    }
    for v in p.leaves() {
        match v.kind {
            VertexKind::Asserted if !o.contains(&v.axiom) => return Err(InvalidProof::LeafNotAsserted(v.id.clone())),
            VertexKind::Known if !Signature::of(&v.axiom).is_subset(known) => {
                return Err(InvalidProof::KnownOutsideSignature(v.id.clone()))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Steps whose premises do not entail the conclusion.
pub fn unsound_steps(p: &Proof, oracle: &dyn EntailmentOracle) -> Result<Vec<String>, ReasonerError> {
    let mut bad = Vec::new();
    for s in &p.steps {
        let premises: Vec<Axiom> = s.premises.iter().map(|&q| p.vertices[q].axiom.clone()).collect();
        if !oracle.entails(&premises, &p.vertices[s.conclusion].axiom)? {
            bad.push(s.id.clone());
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ConceptExpr;

    fn chain() -> Proof {
        Proof::from_tree(&ProofTree::Node {
            axiom: Axiom::atomic("A", "C"),
            rule: InferenceRule::Hier,
            premises: vec![ProofTree::asserted(Axiom::atomic("A", "B")), ProofTree::asserted(Axiom::atomic("B", "C"))],
        })
    }

    #[test]
    fn measures_on_chain() {
        let p = chain();
        assert_eq!(evaluate_measure(&p, Measure::TreeSize), 3);
        assert_eq!(evaluate_measure(&p, Measure::Depth), 1);
        assert_eq!(evaluate_measure(&p, Measure::WeightedSize), 9);
        validate_structure(&p).unwrap();
        assert_eq!(p.root().kind, VertexKind::Conclusion);
    }

    #[test]
    fn single_vertex() {
        let p = Proof::from_tree(&ProofTree::asserted(Axiom::atomic("A", "B")));
        assert_eq!(evaluate_measure(&p, Measure::TreeSize), 1);
        assert_eq!(evaluate_measure(&p, Measure::Depth), 0);
        assert_eq!(evaluate_measure(&p, Measure::WeightedSize), 3);
        validate_structure(&p).unwrap();
    }

    #[test]
    fn two_level_depth() {
        let p = Proof::from_tree(&ProofTree::Node {
            axiom: Axiom::atomic("A", "D"),
            rule: InferenceRule::Hier,
            premises: vec![
                ProofTree::Node {
                    axiom: Axiom::atomic("A", "C"),
                    rule: InferenceRule::Hier,
                    premises: vec![
                        ProofTree::asserted(Axiom::atomic("A", "B")),
                        ProofTree::asserted(Axiom::atomic("B", "C")),
                    ],
                },
                ProofTree::asserted(Axiom::atomic("C", "D")),
            ],
        });
        assert_eq!(evaluate_measure(&p, Measure::Depth), 2);
        assert_eq!(p.to_tree(), Proof::from_tree(&p.to_tree()).to_tree());
    }

    #[test]
    fn coverage() {
        let p = Proof::from_tree(&ProofTree::asserted(Axiom::ci(
            ConceptExpr::atom("A"),
            ConceptExpr::exists(crate::syntax::RoleName::new("r"), ConceptExpr::atom("B")),
        )));
        assert!((signature_coverage(&p, &Signature::from_concepts(["A", "B"])) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(signature_coverage(&p, &Signature::of(p.goal())), 1.0);
        assert_eq!(signature_coverage(&p, &Signature::from_concepts(["Z"])), 0.0);
    }

    #[test]
    fn broken_structures_are_rejected() {
        let mut p = chain();
        p.steps[0].premises.push(1);
        assert!(validate_structure(&p).is_err());
        let mut q = chain();
        q.vertices[1].kind = VertexKind::Inferred;
        assert!(validate_structure(&q).is_err());
    }

    #[test]
    fn measure_names() {
        for m in Measure::ALL {
            assert_eq!(m.as_str().parse::<Measure>().unwrap(), m);
        }
        assert!("width".parse::<Measure>().is_err());
    }
}

//! The JSON exchange format for proofs and its validator.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{evaluate_measure, signature_coverage, validate_structure, Measure, Proof, ProofStep, ProofVertex, VertexKind};
use crate::derivation::InferenceRule;
use crate::parse::parse_axiom;
use crate::render::{functional, pretty};
use crate::syntax::Signature;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Measures {
    pub tree_size: u64,
    pub depth: u64,
    pub weighted_size: u64,
}

impl Measures {
    pub fn of(p: &Proof) -> Self {
        Measures {
            tree_size: evaluate_measure(p, Measure::TreeSize),
            depth: evaluate_measure(p, Measure::Depth),
            weighted_size: evaluate_measure(p, Measure::WeightedSize),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub axiom: String,
    pub pretty: String,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceDoc {
    pub id: String,
    pub rule: String,
    pub premises: Vec<String>,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProofDocument {
    pub id: String,
    pub goal: String,
    pub method: String,
    pub measures: Measures,
    pub coverage_pct: f64,
    pub nodes: Vec<NodeDoc>,
    pub inferences: Vec<InferenceDoc>,
}

impl ProofDocument {
    /// Coverage is measured against `known`.
    pub fn new(id: impl Into<String>, method: impl Into<String>, p: &Proof, known: &Signature) -> Self {
        let pct = signature_coverage(p, known) * 100.0;
        ProofDocument {
            id: id.into(),
            goal: functional(p.goal()),
            method: method.into(),
            measures: Measures::of(p),
            coverage_pct: (pct * 100.0).round() / 100.0,
            nodes: p
                .vertices
                .iter()
                .map(|v| NodeDoc { id: v.id.clone(), axiom: functional(&v.axiom), pretty: pretty(&v.axiom), kind: v.kind })
                .collect(),
            inferences: p
                .steps
                .iter()
                .map(|s| InferenceDoc {
                    id: s.id.clone(),
                    rule: s.rule.id(),
                    premises: s.premises.iter().map(|&q| p.vertices[q].id.clone()).collect(),
                    conclusion: p.vertices[s.conclusion].id.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the proof; the root (the vertex that is no premise) is moved
    /// to the front.
    pub fn to_proof(&self) -> Result<Proof, String> {
        let used: BTreeSet<&str> = self.inferences.iter().flat_map(|i| i.premises.iter().map(String::as_str)).collect();
        let roots: Vec<usize> = (0..self.nodes.len()).filter(|&i| !used.contains(self.nodes[i].id.as_str())).collect();
        let [root] = roots[..] else {
            return Err(format!("expected exactly one root, found {}", roots.len()));
        };
        let mut order: Vec<usize> = vec![root];
        order.extend((0..self.nodes.len()).filter(|&i| i != root));
        let mut index = HashMap::new();
        let mut vertices = Vec::new();
        for (pos, &i) in order.iter().enumerate() {
            let n = &self.nodes[i];
            let axiom = parse_axiom(&n.axiom).map_err(|e| format!("node {}: {e}", n.id))?;
            index.insert(n.id.as_str(), pos);
            vertices.push(ProofVertex { id: n.id.clone(), axiom, kind: n.kind });
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| format!("unknown node id {id}"));
        let mut steps = Vec::new();
        for inf in &self.inferences {
            let rule = InferenceRule::from_id(&inf.rule).ok_or_else(|| format!("unknown rule {}", inf.rule))?;
            let premises = inf.premises.iter().map(|p| lookup(p)).collect::<Result<Vec<_>, _>>()?;
            steps.push(ProofStep { id: inf.id.clone(), premises, conclusion: lookup(&inf.conclusion)?, rule });
        }
        Ok(Proof { vertices, steps })
    }
}

fn expect_keys(v: &Value, what: &str, keys: &[&str]) -> Result<(), String> {
    let obj = v.as_object().ok_or_else(|| format!("{what} is not an object"))?;
    let found: BTreeSet<&str> = obj.keys().map(String::as_str).collect();
    let wanted: BTreeSet<&str> = keys.iter().copied().collect();
    if found != wanted {
        return Err(format!("{what} has keys {found:?}, expected {wanted:?}"));
    }
    Ok(())
}

/// Checks a served proof against the schema, the structural invariants and
/// its own reported measures.
pub fn validate_proof_json(v: &Value) -> Result<(), String> {
    expect_keys(v, "proof", &["id", "goal", "method", "measures", "coveragePct", "nodes", "inferences"])?;
    expect_keys(&v["measures"], "measures", &["treeSize", "depth", "weightedSize"])?;
    for n in v["nodes"].as_array().ok_or("nodes is not an array")? {
        expect_keys(n, "node", &["id", "axiom", "pretty", "kind"])?;
    }
    for i in v["inferences"].as_array().ok_or("inferences is not an array")? {
        expect_keys(i, "inference", &["id", "rule", "premises", "conclusion"])?;
    }
    let doc: ProofDocument = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    if !(0.0..=100.0).contains(&doc.coverage_pct) {
        return Err(format!("coveragePct {} out of range", doc.coverage_pct));
    }
    let p = doc.to_proof()?;
    validate_structure(&p).map_err(|e| e.to_string())?;
    if functional(p.goal()) != doc.goal {
        return Err("goal does not label the root".into());
    }
    for n in &doc.nodes {
        let a = parse_axiom(&n.axiom).map_err(|e| e.to_string())?;
        if pretty(&a) != n.pretty {
            return Err(format!("node {} has inconsistent pretty form", n.id));
        }
    }
    if Measures::of(&p) != doc.measures {
        return Err("measures do not match the proof".into());
    }
    Ok(())
}

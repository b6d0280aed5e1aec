//! Inference rules and the derivation hypergraph produced by saturation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::syntax::{Axiom, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InferenceRule {
    /// `C ⊑ C`
    Refl,
    /// `C ⊑ ⊤`
    Top,
    /// Composition with a told inclusion.
    Hier,
    AndMinus,
    AndPlus,
    Exists,
    RoleHier,
    Asserted,
    Known,
    /// A forgetting step eliminating the given name.
    Forget(Symbol),
    /// Final step of a forgetting-based proof when no name was eliminated.
    Entailment,
}

/// Human-readable description of a rule, served to the explorer.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleCard {
    pub display_name: String,
    pub description: String,
    pub schematic_premises: Vec<String>,
    pub schematic_conclusion: String,
}

impl InferenceRule {
    pub fn id(&self) -> String {
        match self {
            InferenceRule::Refl => "R0-Refl".into(),
            InferenceRule::Top => "R-Top".into(),
            InferenceRule::Hier => "R-Hier".into(),
            InferenceRule::AndMinus => "R-AndMinus".into(),
            InferenceRule::AndPlus => "R-AndPlus".into(),
            InferenceRule::Exists => "R-Exists".into(),
            InferenceRule::RoleHier => "R-RoleHier".into(),
            InferenceRule::Asserted => "Asserted".into(),
            InferenceRule::Known => "Known".into(),
            InferenceRule::Forget(x) => format!("Forget({x})"),
            InferenceRule::Entailment => "Entailment".into(),
        }
    }

    /// Minimum number of premises of an application.
    pub fn arity(&self) -> usize {
        match self {
            InferenceRule::Refl
            | InferenceRule::Top
            | InferenceRule::Asserted
            | InferenceRule::Known => 0,
            _ => 1,
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            InferenceRule::Refl => "Reflexivity".into(),
            InferenceRule::Top => "Top".into(),
            InferenceRule::Hier => "Told Subsumption".into(),
            InferenceRule::AndMinus => "Conjunction Decomposition".into(),
            InferenceRule::AndPlus => "Conjunction Composition".into(),
            InferenceRule::Exists => "Existential Propagation".into(),
            InferenceRule::RoleHier => "Role Hierarchy".into(),
            InferenceRule::Asserted => "Asserted Axiom".into(),
            InferenceRule::Known => "Known Axiom".into(),
            InferenceRule::Forget(x) => format!("Forget {x}"),
            InferenceRule::Entailment => "Entailment".into(),
        }
    }

    pub fn card(&self) -> RuleCard {
        let (description, premises, conclusion): (&str, &[&str], &str) = match self {
            InferenceRule::Refl => ("Every concept is subsumed by itself.", &[], "C ⊑ C"),
            InferenceRule::Top => ("Every concept is subsumed by ⊤.", &[], "C ⊑ ⊤"),
            InferenceRule::Hier => (
                "A derived subsumption is chained with an inclusion from the ontology.",
                &["C ⊑ D", "D ⊑ E"],
                "C ⊑ E",
            ),
            InferenceRule::AndMinus => (
                "A subsumer that is a conjunction yields each of its conjuncts.",
                &["C ⊑ D₁ ⊓ D₂"],
                "C ⊑ Dᵢ",
            ),
            InferenceRule::AndPlus => (
                "Subsumers are combined into a conjunction that occurs in the ontology.",
                &["C ⊑ D₁", "C ⊑ D₂"],
                "C ⊑ D₁ ⊓ D₂",
            ),
            InferenceRule::Exists => (
                "A subsumer of an existential filler is propagated through the role, \
                 following the role hierarchy.",
                &["C ⊑ ∃r.D", "D ⊑ E", "r ⊑ s"],
                "C ⊑ ∃s.E",
            ),
            InferenceRule::RoleHier => ("Role inclusions are transitive.", &["r ⊑ s", "s ⊑ t"], "r ⊑ t"),
            InferenceRule::Asserted => ("The axiom occurs in the ontology.", &[], "α"),
            InferenceRule::Known => (
                "The axiom uses only names from the known signature and needs no explanation.",
                &[],
                "α",
            ),
            InferenceRule::Forget(_) => (
                "The conclusion follows from the premises after eliminating a name by forgetting.",
                &["𝒫"],
                "α ∈ 𝒫⁻ˣ",
            ),
            InferenceRule::Entailment => ("The conclusion is entailed by the premises.", &["𝒥"], "α"),
        };
        RuleCard {
            display_name: self.display_name(),
            description: match self {
                InferenceRule::Forget(x) => format!("{description} Eliminated name: {x}."),
                _ => description.into(),
            },
            schematic_premises: premises.iter().map(|s| s.to_string()).collect(),
            schematic_conclusion: conclusion.into(),
        }
    }

    /// Looks a rule up by its id as produced by [`InferenceRule::id`].
    pub fn from_id(id: &str) -> Option<InferenceRule> {
        Some(match id {
            "R0-Refl" => InferenceRule::Refl,
            "R-Top" => InferenceRule::Top,
            "R-Hier" => InferenceRule::Hier,
            "R-AndMinus" => InferenceRule::AndMinus,
            "R-AndPlus" => InferenceRule::AndPlus,
            "R-Exists" => InferenceRule::Exists,
            "R-RoleHier" => InferenceRule::RoleHier,
            "Asserted" => InferenceRule::Asserted,
            "Known" => InferenceRule::Known,
            "Entailment" => InferenceRule::Entailment,
            _ => {
                let inner = id.strip_prefix("Forget(")?.strip_suffix(')')?;
                let name = crate::syntax::ConceptName::try_new(inner).ok()?;
                InferenceRule::Forget(Symbol::Concept(name))
            }
        })
    }
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inference {
    /// Sorted, duplicate-free.
    pub premises: Vec<VertexId>,
    pub conclusion: VertexId,
    pub rule: InferenceRule,
}

/// All recorded inferences over a set of axioms; one vertex per distinct
/// axiom. Cycles are allowed.
#[derive(Clone, Debug, Default)]
pub struct DerivationStructure {
    vertices: Vec<Axiom>,
    index: HashMap<Axiom, VertexId>,
    inferences: Vec<Inference>,
    seen: HashSet<Inference>,
    by_conclusion: Vec<Vec<usize>>,
}

impl DerivationStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, a: Axiom) -> VertexId {
        if let Some(&v) = self.index.get(&a) {
            return v;
        }
        let v = self.vertices.len();
        self.index.insert(a.clone(), v);
        self.vertices.push(a);
        self.by_conclusion.push(Vec::new());
        v
    }

    /// Records an inference, adding vertices as needed. Returns false if the
    /// same inference was already present.
    pub fn add_inference(&mut self, premises: Vec<Axiom>, conclusion: Axiom, rule: InferenceRule) -> bool {
        let mut ps: Vec<VertexId> = premises.into_iter().map(|p| self.add_vertex(p)).collect();
        ps.sort_unstable();
        ps.dedup();
        let c = self.add_vertex(conclusion);
        let inf = Inference { premises: ps, conclusion: c, rule };
        if self.seen.contains(&inf) {
            return false;
        }
        self.seen.insert(inf.clone());
        self.by_conclusion[c].push(self.inferences.len());
        self.inferences.push(inf);
        true
    }

    pub fn assert_axiom(&mut self, a: Axiom) {
        self.add_inference(Vec::new(), a, InferenceRule::Asserted);
    }

    pub fn vertex(&self, a: &Axiom) -> Option<VertexId> {
        self.index.get(a).copied()
    }

    pub fn axiom(&self, v: VertexId) -> &Axiom {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Axiom] {
        &self.vertices
    }

    pub fn inferences(&self) -> &[Inference] {
        &self.inferences
    }

    pub fn inferences_for(&self, v: VertexId) -> impl Iterator<Item = &Inference> {
        self.by_conclusion[v].iter().map(move |&i| &self.inferences[i])
    }

    pub fn is_asserted(&self, v: VertexId) -> bool {
        self.inferences_for(v).any(|i| i.rule == InferenceRule::Asserted)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Inferences as (premise axioms, conclusion, rule), for set comparisons.
    pub fn edge_set(&self) -> HashSet<(Vec<Axiom>, Axiom, InferenceRule)> {
        self.inferences
            .iter()
            .map(|i| {
                let mut ps: Vec<Axiom> = i.premises.iter().map(|&p| self.vertices[p].clone()).collect();
                ps.sort();
                (ps, self.vertices[i.conclusion].clone(), i.rule.clone())
            })
            .collect()
    }
}

//! Seeded random ontologies for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Axiom, ConceptExpr, ConceptName, Ontology, RoleName};

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_axioms: usize,
    pub concept_names: usize,
    pub role_names: usize,
    /// Nesting depth of generated concepts.
    pub max_depth: usize,
    /// Chance that an axiom is a role inclusion.
    pub role_inclusion_rate: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_axioms: 15, concept_names: 6, role_names: 2, max_depth: 2, role_inclusion_rate: 0.1 }
    }
}

fn concept_name(i: usize) -> ConceptName {
    ConceptName::new(&format!("A{i}"))
}

fn role_name(i: usize) -> RoleName {
    RoleName::new(&format!("r{i}"))
}

fn atom<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> ConceptExpr {
    ConceptExpr::Atomic(concept_name(rng.gen_range(0..cfg.concept_names)))
}

/// An ELH concept; `⊤` is rare.
pub fn elh_concept<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> ConceptExpr {
    let roll: f64 = rng.gen();
    if depth == 0 || roll < 0.5 {
        return if roll < 0.03 { ConceptExpr::Top } else { atom(rng, cfg) };
    }
    if roll < 0.75 || cfg.role_names == 0 {
        ConceptExpr::and([elh_concept(rng, cfg, depth - 1), elh_concept(rng, cfg, depth - 1)])
    } else {
        ConceptExpr::exists(role_name(rng.gen_range(0..cfg.role_names)), elh_concept(rng, cfg, depth - 1))
    }
}

pub fn alch_concept<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> ConceptExpr {
    let roll: f64 = rng.gen();
    if depth == 0 || roll < 0.4 {
        return match roll {
            r if r < 0.03 => ConceptExpr::Bottom,
            r if r < 0.1 => ConceptExpr::not(atom(rng, cfg)),
            _ => atom(rng, cfg),
        };
    }
    let sub = |rng: &mut R| alch_concept(rng, cfg, depth - 1);
    let role = |rng: &mut R| role_name(rng.gen_range(0..cfg.role_names.max(1)));
    match rng.gen_range(0..5) {
        0 => ConceptExpr::and([sub(rng), sub(rng)]),
        1 => ConceptExpr::or([sub(rng), sub(rng)]),
        2 => ConceptExpr::not(sub(rng)),
        3 => ConceptExpr::exists(role(rng), sub(rng)),
        _ => ConceptExpr::forall(role(rng), sub(rng)),
    }
}

fn role_inclusion<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Option<Axiom> {
    if cfg.role_names < 2 {
        return None;
    }
    let mut ix: Vec<usize> = (0..cfg.role_names).collect();
    ix.shuffle(rng);
    Some(Axiom::RoleInclusion { sub: role_name(ix[0]), sup: role_name(ix[1]) })
}

fn build<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &GenConfig,
    name: &str,
    concept: impl Fn(&mut R, &GenConfig, usize) -> ConceptExpr,
) -> Ontology {
    let n = rng.gen_range(1..=cfg.max_axioms.max(1));
    let mut o = Ontology::new(name);
    for _ in 0..n {
        if rng.gen_bool(cfg.role_inclusion_rate) {
            if let Some(ri) = role_inclusion(rng, cfg) {
                o.insert(ri);
                continue;
            }
        }
        // Half the axioms have a plain name on the left, as in real TBoxes.
        let lhs = if rng.gen_bool(0.5) { atom(rng, cfg) } else { concept(rng, cfg, cfg.max_depth) };
        let rhs = concept(rng, cfg, cfg.max_depth);
        let a = Axiom::ci(lhs, rhs);
        if !a.is_tautology() {
            o.insert(a);
        }
    }
    o
}

pub fn random_elh<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Ontology {
    build(rng, cfg, "random-elh", elh_concept)
}

pub fn random_alch<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Ontology {
    build(rng, cfg, "random-alch", alch_concept)
}

mod common;

use std::collections::BTreeSet;
use std::time::Duration;

use common::{canonical, enumerate, models};
use dlproof_core::elh::{entailed_atomic_cis, saturate};
use dlproof_core::forget::{forget, simplify, ForgettingResult};
use dlproof_core::generate::{random_alch, random_elh, GenConfig};
use dlproof_core::justify::{one_justification, TableauOracle};
use dlproof_core::pattern::canonical_pattern;
use dlproof_core::proof::{
    evaluate_measure, extract_optimal_proof, validate, validate_proof_json, Measure, ProofDocument,
};
use dlproof_core::render::functional;
use dlproof_core::tableau::{entails, TableauConfig};
use dlproof_core::{parse_ontology, Axiom, ConceptExpr, ConceptName, HasSignature, InferenceRule, Ontology, RoleName, Signature};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_alch() -> GenConfig {
    GenConfig { max_axioms: 5, concept_names: 3, role_names: 1, max_depth: 1, role_inclusion_rate: 0.0 }
}

fn atomic_pairs(o: &Ontology) -> Vec<Axiom> {
    let names: Vec<ConceptName> = o.signature().concepts.into_iter().collect();
    let mut out = Vec::new();
    for a in &names {
        for b in &names {
            if a != b {
                out.push(Axiom::ci(ConceptExpr::Atomic(a.clone()), ConceptExpr::Atomic(b.clone())));
            }
        }
    }
    out
}

fn cfg() -> TableauConfig {
    TableauConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_matches_canonical_model(seed in any::<u64>()) {
        let o = random_elh(&mut rng(seed), &GenConfig::default());
        let got: BTreeSet<Axiom> = entailed_atomic_cis(&o, false).unwrap().into_iter().collect();
        prop_assert_eq!(got, canonical::subsumptions(&o));
    }

    #[test]
    fn saturation_is_deterministic(seed in any::<u64>()) {
        let o = random_elh(&mut rng(seed), &GenConfig::default());
        prop_assert_eq!(saturate(&o).unwrap().edge_set(), saturate(&o).unwrap().edge_set());
    }

    #[test]
    fn saturation_edges_are_sound(seed in any::<u64>()) {
        let gen = GenConfig { max_axioms: 8, ..GenConfig::default() };
        let o = random_elh(&mut rng(seed), &gen);
        let d = saturate(&o).unwrap();
        for inf in d.inferences().iter().filter(|i| i.rule != InferenceRule::Asserted) {
            let premises: Vec<Axiom> = inf.premises.iter().map(|&p| d.axiom(p).clone()).collect();
            prop_assert!(entails(&premises, d.axiom(inf.conclusion), cfg()).unwrap());
        }
    }

    #[test]
    fn tableau_agrees_with_saturation(seed in any::<u64>()) {
        let o = random_elh(&mut rng(seed), &GenConfig::default());
        let entailed: BTreeSet<Axiom> = entailed_atomic_cis(&o, false).unwrap().into_iter().collect();
        for goal in atomic_pairs(&o) {
            prop_assert_eq!(entails(o.axioms(), &goal, cfg()).unwrap(), entailed.contains(&goal));
        }
    }

    #[test]
    fn tableau_entailments_have_no_small_countermodel(seed in any::<u64>()) {
        let o = random_alch(&mut rng(seed), &small_alch());
        for goal in atomic_pairs(&o) {
            if entails(o.axioms(), &goal, cfg()).unwrap() {
                prop_assert!(!models::countermodel_exists(o.axioms(), &goal, 2));
            }
        }
    }

    #[test]
    fn tableau_terminates_within_node_limit(seed in any::<u64>()) {
        let o = random_alch(&mut rng(seed), &GenConfig { max_axioms: 30, ..GenConfig::default() });
        for goal in atomic_pairs(&o) {
            prop_assert!(entails(o.axioms(), &goal, cfg()).is_ok());
        }
    }

    #[test]
    fn tableau_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_alch(&mut r, &small_alch());
        let extra = random_alch(&mut r, &small_alch());
        let mut both = o.axioms().to_vec();
        both.extend(extra.iter().cloned());
        for goal in atomic_pairs(&o) {
            if entails(o.axioms(), &goal, cfg()).unwrap() {
                prop_assert!(entails(&both, &goal, cfg()).unwrap());
            }
        }
    }

    #[test]
    fn extraction_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = enumerate::random_structure(&mut r, 10);
        let known = if r.gen_bool(0.3) { Signature::from_concepts(["A0", "B1"]) } else { Signature::new() };
        for v in 0..d.len() {
            for m in Measure::ALL {
                let expected = enumerate::min_measure(&d, v, m, &known);
                let got = extract_optimal_proof(&d, d.axiom(v), m, &known).ok().map(|p| evaluate_measure(&p, m));
                prop_assert_eq!(got, expected, "vertex {} measure {}", v, m);
            }
        }
    }

    #[test]
    fn condensation_never_grows(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_elh(&mut r, &GenConfig::default());
        let d = saturate(&o).unwrap();
        let names: Vec<ConceptName> = o.signature().concepts.into_iter().collect();
        let mut s = Signature::new();
        s.concepts.extend(names.iter().filter(|_| r.gen_bool(0.5)).cloned());
        for goal in entailed_atomic_cis(&o, false).unwrap() {
            let full = extract_optimal_proof(&d, &goal, Measure::TreeSize, &Signature::new()).unwrap();
            let small = extract_optimal_proof(&d, &goal, Measure::TreeSize, &s).unwrap();
            let (full, small) = (evaluate_measure(&full, Measure::TreeSize), evaluate_measure(&small, Measure::TreeSize));
            prop_assert!(small <= full);
            if goal.signature().is_subset(&s) {
                prop_assert_eq!(small, 1);
            }
        }
    }

    #[test]
    fn patterns_ignore_renaming(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_alch(&mut r, &GenConfig { role_inclusion_rate: 0.2, ..GenConfig::default() });
        let mut perm: Vec<usize> = (0..6).collect();
        perm.shuffle(&mut r);
        let mut rperm: Vec<usize> = (0..2).collect();
        rperm.shuffle(&mut r);
        let concept = |c: &ConceptName| {
            let i: usize = c.as_str()[1..].parse().unwrap();
            ConceptExpr::atom(&format!("N{}", perm[i]))
        };
        let role = |x: &RoleName| {
            let i: usize = x.as_str()[1..].parse().unwrap();
            RoleName::new(&format!("s{}", rperm[i]))
        };
        let goal = Axiom::atomic("A0", "A1");
        let mut renamed: Vec<Axiom> = o.iter().map(|a| a.map_names(&concept, &role)).collect();
        renamed.reverse();
        prop_assert_eq!(
            canonical_pattern(&goal, o.axioms()),
            canonical_pattern(&goal.map_names(&concept, &role), &renamed)
        );
    }

    #[test]
    fn functional_rendering_round_trips(seed in any::<u64>()) {
        let gen = GenConfig { max_axioms: 50, max_depth: 4, role_inclusion_rate: 0.1, ..GenConfig::default() };
        let o = random_alch(&mut rng(seed), &gen);
        let text: Vec<String> = o.iter().map(functional).collect();
        let back = parse_ontology(&text.join("\n")).unwrap();
        prop_assert_eq!(back.axioms(), o.axioms());
    }

    #[test]
    fn elh_ontologies_are_alch(seed in any::<u64>()) {
        let o = random_elh(&mut rng(seed), &GenConfig::default());
        prop_assert!(o.fragment().within_alch());
    }

    #[test]
    fn simplify_preserves_atomic_entailments(seed in any::<u64>()) {
        let o = random_alch(&mut rng(seed), &small_alch());
        let s = simplify(&o);
        for goal in atomic_pairs(&o) {
            prop_assert_eq!(entails(o.axioms(), &goal, cfg()).unwrap(), entails(s.axioms(), &goal, cfg()).unwrap());
        }
    }

    #[test]
    fn forgetting_eliminates_and_preserves(seed in any::<u64>()) {
        let mut r = rng(seed);
        let o = random_alch(&mut r, &GenConfig { max_axioms: 6, concept_names: 4, role_names: 1, max_depth: 1, role_inclusion_rate: 0.0 });
        let sig = o.signature();
        let Some(x) = sig.symbols().collect::<Vec<_>>().choose(&mut r).cloned() else { return Ok(()) };
        let ForgettingResult::Success(res) = forget(&o, &x, Duration::from_secs(2)) else { return Ok(()) };
        prop_assert!(!res.signature().contains(&x));
        for goal in atomic_pairs(&o).into_iter().filter(|g| !g.mentions(&x)) {
            prop_assert_eq!(
                entails(o.axioms(), &goal, cfg()).unwrap(),
                entails(res.axioms(), &goal, cfg()).unwrap(),
                "{} after forgetting {}", functional(&goal), x.as_str()
            );
        }
    }

    #[test]
    fn justifications_are_minimal_valid_and_deterministic(seed in any::<u64>()) {
        let o = random_alch(&mut rng(seed), &GenConfig { max_axioms: 8, concept_names: 4, ..GenConfig::default() });
        let oracle = TableauOracle::default();
        for goal in atomic_pairs(&o) {
            let Ok(j) = one_justification(&o, &goal, &oracle) else { continue };
            prop_assert!(entails(&j.axioms, &goal, cfg()).unwrap());
            for i in 0..j.axioms.len() {
                let mut rest = j.axioms.clone();
                rest.remove(i);
                prop_assert!(!entails(&rest, &goal, cfg()).unwrap());
            }
            prop_assert_eq!(one_justification(&o, &goal, &oracle).unwrap(), j);
        }
    }

    #[test]
    fn proof_documents_round_trip(seed in any::<u64>()) {
        let o = random_elh(&mut rng(seed), &GenConfig::default());
        let d = saturate(&o).unwrap();
        for goal in entailed_atomic_cis(&o, false).unwrap() {
            let p = extract_optimal_proof(&d, &goal, Measure::WeightedSize, &Signature::new()).unwrap();
            validate(&p, &o, &goal, &Signature::new()).unwrap();
            let doc = ProofDocument::new("p1", "elk-minimal", &p, &Signature::new());
            let json = serde_json::to_value(&doc).unwrap();
            prop_assert!(validate_proof_json(&json).is_ok());
            prop_assert_eq!(doc.to_proof().unwrap(), p.clone());
            let (size, depth, weight) = (
                evaluate_measure(&p, Measure::TreeSize),
                evaluate_measure(&p, Measure::Depth),
                evaluate_measure(&p, Measure::WeightedSize),
            );
            prop_assert!(depth < size && size <= weight);
        }
    }
}

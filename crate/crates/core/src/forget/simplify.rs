use crate::syntax::{Axiom, ConceptExpr, Ontology};

/// Applies the unit and double-negation rules bottom-up until nothing
/// changes.
pub fn simplify_concept(c: &ConceptExpr) -> ConceptExpr {
    let mut cur = c.clone();
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn step(c: &ConceptExpr) -> ConceptExpr {
    use ConceptExpr::*;
    match c {
        Top | Bottom | Atomic(_) => c.clone(),
        Not(inner) => match step(inner) {
            Top => Bottom,
            Bottom => Top,
            Not(d) => *d,
            other => ConceptExpr::not(other),
        },
        And(cs) => {
            let parts: Vec<ConceptExpr> = cs.iter().map(step).collect();
            if parts.contains(&Bottom) {
                Bottom
            } else {
                ConceptExpr::and(parts.into_iter().filter(|p| *p != Top))
            }
        }
        Or(cs) => {
            let parts: Vec<ConceptExpr> = cs.iter().map(step).collect();
            if parts.contains(&Top) {
                Top
            } else {
                ConceptExpr::or(parts.into_iter().filter(|p| *p != Bottom))
            }
        }
        Exists(r, f) => match step(f) {
            Bottom => Bottom,
            f => ConceptExpr::exists(r.clone(), f),
        },
        Forall(r, f) => match step(f) {
            Top => Top,
            f => ConceptExpr::forall(r.clone(), f),
        },
    }
}

/// Simplifies both sides; `None` if the result is a tautology.
pub fn simplify_axiom(a: &Axiom) -> Option<Axiom> {
    let out = match a {
        Axiom::ConceptInclusion { lhs, rhs } => Axiom::ci(simplify_concept(lhs), simplify_concept(rhs)),
        Axiom::RoleInclusion { .. } => a.clone(),
    };
    (!out.is_tautology()).then_some(out)
}

/// Simplifies every axiom and drops tautologies, keeping the order of the
/// first occurrence of each result.
pub fn simplify(o: &Ontology) -> Ontology {
    Ontology::from_axioms(o.name(), o.iter().filter_map(simplify_axiom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    fn simp(text: &str) -> Ontology {
        simplify(&parse_ontology(text).unwrap())
    }

    #[test]
    fn existential_of_bottom_collapses() {
        let o = simp(
            "SubClassOf(C ObjectIntersectionOf(ObjectSomeValuesFrom(r owl:Thing) ObjectSomeValuesFrom(r owl:Nothing)))",
        );
        assert_eq!(o.axioms(), &[Axiom::ci(ConceptExpr::atom("C"), ConceptExpr::Bottom)]);
    }

    #[test]
    fn tautologies_are_dropped() {
        assert!(simp("SubClassOf(A A)").is_empty());
        assert!(simp("SubClassOf(A ObjectUnionOf(B owl:Thing))").is_empty());
        assert!(simp("SubClassOf(ObjectIntersectionOf(A owl:Nothing) B)").is_empty());
    }

    #[test]
    fn units() {
        assert_eq!(simp("SubClassOf(A ObjectIntersectionOf(B owl:Thing))").axioms(), &[Axiom::atomic("A", "B")]);
        assert_eq!(
            simp("SubClassOf(A ObjectComplementOf(ObjectComplementOf(B)))").axioms(),
            &[Axiom::atomic("A", "B")]
        );
        assert_eq!(
            simp("SubClassOf(A ObjectUnionOf(B owl:Nothing))").axioms(),
            &[Axiom::atomic("A", "B")]
        );
        assert!(simp("SubClassOf(A ObjectAllValuesFrom(r owl:Thing))").is_empty());
        assert_eq!(
            simp("SubClassOf(A ObjectComplementOf(owl:Thing))").axioms(),
            &[Axiom::ci(ConceptExpr::atom("A"), ConceptExpr::Bottom)]
        );
    }
}

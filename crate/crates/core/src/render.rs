//! Functional-style and symbolic rendering of concepts and axioms.

use crate::syntax::{Axiom, ConceptExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// Re-parseable `SubClassOf(...)` syntax.
    Functional,
    /// `⊑ ⊓ ⊔ ¬ ∃ ∀ ⊤ ⊥` notation for display.
    Pretty,
}

pub fn render_axiom(a: &Axiom, style: RenderStyle) -> String {
    match style {
        RenderStyle::Functional => functional(a),
        RenderStyle::Pretty => pretty(a),
    }
}

pub fn functional(a: &Axiom) -> String {
    let mut out = String::new();
    match a {
        Axiom::ConceptInclusion { lhs, rhs } => {
            out.push_str("SubClassOf(");
            concept_functional(lhs, &mut out);
            out.push(' ');
            concept_functional(rhs, &mut out);
            out.push(')');
        }
        Axiom::RoleInclusion { sub, sup } => {
            out.push_str(&format!("SubObjectPropertyOf({sub} {sup})"));
        }
    }
    out
}

pub fn concept_functional_string(c: &ConceptExpr) -> String {
    let mut out = String::new();
    concept_functional(c, &mut out);
    out
}

fn concept_functional(c: &ConceptExpr, out: &mut String) {
    match c {
        ConceptExpr::Top => out.push_str("owl:Thing"),
        ConceptExpr::Bottom => out.push_str("owl:Nothing"),
        ConceptExpr::Atomic(a) => out.push_str(a.as_str()),
        ConceptExpr::Not(inner) => {
            out.push_str("ObjectComplementOf(");
            concept_functional(inner, out);
            out.push(')');
        }
        ConceptExpr::And(cs) | ConceptExpr::Or(cs) => {
            out.push_str(if matches!(c, ConceptExpr::And(_)) {
                "ObjectIntersectionOf("
            } else {
                "ObjectUnionOf("
            });
            for (i, x) in cs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                concept_functional(x, out);
            }
            out.push(')');
        }
        ConceptExpr::Exists(r, f) | ConceptExpr::Forall(r, f) => {
            out.push_str(if matches!(c, ConceptExpr::Exists(..)) {
                "ObjectSomeValuesFrom("
            } else {
                "ObjectAllValuesFrom("
            });
            out.push_str(r.as_str());
            out.push(' ');
            concept_functional(f, out);
            out.push(')');
        }
    }
}

pub fn pretty(a: &Axiom) -> String {
    match a {
        Axiom::ConceptInclusion { lhs, rhs } => format!("{} ⊑ {}", concept_pretty(lhs), concept_pretty(rhs)),
        Axiom::RoleInclusion { sub, sup } => format!("{sub} ⊑ {sup}"),
    }
}

pub fn concept_pretty(c: &ConceptExpr) -> String {
    match c {
        ConceptExpr::Top => "⊤".into(),
        ConceptExpr::Bottom => "⊥".into(),
        ConceptExpr::Atomic(a) => a.as_str().into(),
        ConceptExpr::Not(inner) => format!("¬{}", wrapped(inner)),
        ConceptExpr::And(cs) => cs.iter().map(wrapped).collect::<Vec<_>>().join(" ⊓ "),
        ConceptExpr::Or(cs) => cs.iter().map(wrapped).collect::<Vec<_>>().join(" ⊔ "),
        ConceptExpr::Exists(r, f) => format!("∃{r}.{}", wrapped(f)),
        ConceptExpr::Forall(r, f) => format!("∀{r}.{}", wrapped(f)),
    }
}

fn wrapped(c: &ConceptExpr) -> String {
    match c {
        ConceptExpr::And(_) | ConceptExpr::Or(_) => format!("({})", concept_pretty(c)),
        _ => concept_pretty(c),
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&functional(self))
    }
}

impl std::fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&concept_functional_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::RoleName;

    #[test]
    fn renders_existential() {
        let a = Axiom::ci(ConceptExpr::atom("A"), ConceptExpr::exists(RoleName::new("r"), ConceptExpr::atom("B")));
        assert_eq!(render_axiom(&a, RenderStyle::Pretty), "A ⊑ ∃r.B");
        assert_eq!(render_axiom(&a, RenderStyle::Functional), "SubClassOf(A ObjectSomeValuesFrom(r B))");
    }

    #[test]
    fn renders_role_inclusion() {
        assert_eq!(pretty(&Axiom::ri("r", "s")), "r ⊑ s");
        assert_eq!(functional(&Axiom::ri("r", "s")), "SubObjectPropertyOf(r s)");
    }

    #[test]
    fn nested_pretty_uses_parentheses() {
        let c = ConceptExpr::exists(
            RoleName::new("r"),
            ConceptExpr::and([ConceptExpr::atom("B"), ConceptExpr::not(ConceptExpr::atom("C"))]),
        );
        assert_eq!(concept_pretty(&c), "∃r.(B ⊓ ¬C)");
        assert_eq!(concept_pretty(&ConceptExpr::Top), "⊤");
    }
}

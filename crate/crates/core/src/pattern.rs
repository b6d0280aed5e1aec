//! Canonical forms of (goal, axiom set) tasks up to bijective renaming of
//! concept and role names.
//!
//! Names are partitioned into ordered cells and refined by how they occur in
//! the task (color refinement). Remaining ties are broken by individualizing
//! each candidate in turn; every leaf of that search yields a renaming, and the
//! lexicographically smallest renamed task is the canonical pattern. All
//! refinement steps depend only on cell indices, never on the names
//! themselves, so isomorphic tasks reach the same minimum.

use std::collections::{BTreeMap, HashMap};

use crate::render::functional;
use crate::syntax::{Axiom, ConceptExpr, ConceptName, HasSignature, RoleName, Signature, Symbol};

/// A task rewritten over canonical names `C0, C1, …` and `R0, R1, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPattern {
    pub goal: Axiom,
    /// Sorted by functional rendering.
    pub axioms: Vec<Axiom>,
}

impl CanonicalPattern {
    /// Renders the pattern as one line per axiom, goal first.
    pub fn key(&self) -> String {
        let mut s = format!("goal {}", functional(&self.goal));
        for a in &self.axioms {
            s.push('\n');
            s.push_str(&functional(a));
        }
        s
    }

    pub fn has_non_elh_axiom(&self) -> bool {
        self.axioms.iter().any(|a| !a.is_elh())
    }
}

pub fn canonical_pattern(goal: &Axiom, axioms: &[Axiom]) -> CanonicalPattern {
    let mut items: Vec<(bool, Axiom)> = vec![(true, goal.clone())];
    let mut sorted: Vec<Axiom> = axioms.to_vec();
    sorted.sort();
    sorted.dedup();
    items.extend(sorted.into_iter().map(|a| (false, a)));

    let mut sig = Signature::new();
    for (_, a) in &items {
        a.collect_signature(&mut sig);
    }
    let symbols: Vec<Symbol> = sig.symbols().collect();
    let occurrences: Vec<Vec<usize>> = symbols
        .iter()
        .map(|s| items.iter().enumerate().filter(|(_, (_, a))| a.mentions(s)).map(|(i, _)| i).collect())
        .collect();

    let search = Search { items: &items, symbols: &symbols, occurrences: &occurrences };
    let concepts: Vec<usize> = (0..symbols.len()).filter(|&i| matches!(symbols[i], Symbol::Concept(_))).collect();
    let roles: Vec<usize> = (0..symbols.len()).filter(|&i| matches!(symbols[i], Symbol::Role(_))).collect();
    let mut cells = Vec::new();
    if !concepts.is_empty() {
        cells.push(concepts);
    }
    if !roles.is_empty() {
        cells.push(roles);
    }
    let mut best: Option<CanonicalPattern> = None;
    search.explore(cells, &mut best);
    best.unwrap_or_else(|| CanonicalPattern { goal: goal.clone(), axioms: Vec::new() })
}

struct Search<'a> {
    items: &'a [(bool, Axiom)],
    symbols: &'a [Symbol],
    occurrences: &'a [Vec<usize>],
}

impl Search<'_> {
    fn explore(&self, cells: Vec<Vec<usize>>, best: &mut Option<CanonicalPattern>) {
        let cells = self.refine(cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let candidate = self.relabel(&cells);
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    *best = Some(candidate);
                }
            }
            Some(split) => {
                for &v in &cells[split] {
                    let mut next = cells.clone();
                    let rest: Vec<usize> = cells[split].iter().copied().filter(|&u| u != v).collect();
                    next[split] = vec![v];
                    next.insert(split + 1, rest);
                    self.explore(next, best);
                }
            }
        }
    }

    fn cell_of(cells: &[Vec<usize>]) -> HashMap<usize, usize> {
        cells.iter().enumerate().flat_map(|(ci, c)| c.iter().map(move |&s| (s, ci))).collect()
    }

    /// Renders every item with names replaced by their cell index; the
    /// occurrences of `focus` get a distinct marker.
    fn occurrence_profile(&self, cell_of: &HashMap<usize, usize>, focus: usize) -> Vec<String> {
        let mut out: Vec<String> = self.occurrences[focus]
            .iter()
            .map(|&i| {
                let (is_goal, ax) = &self.items[i];
                let renamed = self.rename(ax, &|s| {
                    if s == focus {
                        "Focus".to_string()
                    } else {
                        format!("K{}", cell_of[&s])
                    }
                });
                format!("{}{}", if *is_goal { "G:" } else { "A:" }, functional(&renamed))
            })
            .collect();
        out.sort();
        out
    }

    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let cell_of = Self::cell_of(&cells);
            let mut next = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
                for &s in cell {
                    groups.entry(self.occurrence_profile(&cell_of, s)).or_default().push(s);
                }
                next.extend(groups.into_values());
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn rename(&self, ax: &Axiom, label: &impl Fn(usize) -> String) -> Axiom {
        let index: HashMap<&Symbol, usize> = self.symbols.iter().enumerate().map(|(i, s)| (s, i)).collect();
        ax.map_names(
            &|c: &ConceptName| {
                let i = index[&Symbol::Concept(c.clone())];
                ConceptExpr::Atomic(ConceptName::new(&label(i)))
            },
            &|r: &RoleName| {
                let i = index[&Symbol::Role(r.clone())];
                RoleName::new(&label(i))
            },
        )
    }

    fn relabel(&self, cells: &[Vec<usize>]) -> CanonicalPattern {
        let mut concept_no = 0;
        let mut role_no = 0;
        let mut labels = vec![String::new(); self.symbols.len()];
        for cell in cells {
            let s = cell[0];
            labels[s] = match self.symbols[s] {
                Symbol::Concept(_) => {
                    concept_no += 1;
                    format!("C{}", concept_no - 1)
                }
                Symbol::Role(_) => {
                    role_no += 1;
                    format!("R{}", role_no - 1)
                }
            };
        }
        let goal = self.rename(&self.items[0].1, &|i| labels[i].clone());
        let mut axioms: Vec<Axiom> =
            self.items[1..].iter().map(|(_, a)| self.rename(a, &|i| labels[i].clone())).collect();
        axioms.sort_by_cached_key(functional);
        CanonicalPattern { goal, axioms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    fn task(text: &str, goal: Axiom) -> CanonicalPattern {
        let o = parse_ontology(text).unwrap();
        canonical_pattern(&goal, o.axioms())
    }

    #[test]
    fn renamed_chains_agree() {
        let a = task("SubClassOf(A B)", Axiom::atomic("A", "B"));
        let b = task("SubClassOf(X Y)", Axiom::atomic("X", "Y"));
        assert_eq!(a, b);
    }

    #[test]
    fn different_sizes_differ() {
        let a = task("SubClassOf(A B)", Axiom::atomic("A", "B"));
        let b = task("SubClassOf(A B) SubClassOf(B C)", Axiom::atomic("A", "C"));
        assert_ne!(a, b);
    }

    #[test]
    fn self_loop_differs_from_fresh_filler() {
        let a = task("SubClassOf(A ObjectSomeValuesFrom(r A))", Axiom::atomic("A", "A"));
        let b = task("SubClassOf(A ObjectSomeValuesFrom(r B))", Axiom::atomic("A", "A"));
        assert_ne!(a, b);
    }

    #[test]
    fn symmetric_names_are_handled() {
        let a = task(
            "SubClassOf(A B) SubClassOf(A C) SubClassOf(ObjectIntersectionOf(B C) D)",
            Axiom::atomic("A", "D"),
        );
        let b = task(
            "SubClassOf(P Q2) SubClassOf(P Q1) SubClassOf(ObjectIntersectionOf(Q1 Q2) Z)",
            Axiom::atomic("P", "Z"),
        );
        assert_eq!(a, b);
        assert!(a.goal.is_atomic_ci());
    }
}

//! Abstract syntax for ELH / ALCH: names, concepts, axioms, ontologies and
//! signatures.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid identifier `{0}`")]
pub struct InvalidName(pub String);

/// Returns true if `s` matches `[A-Za-z_][A-Za-z0-9_.-]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

fn interner() -> &'static Mutex<HashSet<Arc<str>>> {
    static INTERNER: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// An interned identifier. Two `Name`s with the same text share storage.
#[derive(Clone)]
pub struct Name(Arc<str>);

impl Name {
    fn intern(s: &str) -> Name {
        let mut set = interner().lock().expect("name interner poisoned");
        if let Some(existing) = set.get(s) {
            return Name(existing.clone());
        }
        let arc: Arc<str> = Arc::from(s);
        set.insert(arc.clone());
        Name(arc)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! name_newtype {
    ($(#[$doc:meta])* $ty:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $ty(Name);

        impl $ty {
            /// Panics if `s` is not a valid identifier.
            pub fn new(s: &str) -> Self {
                Self::try_new(s).unwrap_or_else(|e| panic!("{e}"))
            }

            pub fn try_new(s: &str) -> Result<Self, InvalidName> {
                if is_identifier(s) {
                    Ok($ty(Name::intern(s)))
                } else {
                    Err(InvalidName(s.to_string()))
                }
            }

            pub fn as_str(&self) -> &str {
                self.0.as_str()
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

name_newtype!(
    /// A unary predicate.
    ConceptName
);
name_newtype!(
    /// A binary predicate.
    RoleName
);

/// A concept or role name, used wherever both kinds are handled uniformly
/// (forgetting, signatures of proofs, pattern canonicalization).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Concept(ConceptName),
    Role(RoleName),
}

impl Symbol {
    pub fn as_str(&self) -> &str {
        match self {
            Symbol::Concept(c) => c.as_str(),
            Symbol::Role(r) => r.as_str(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Concept expressions. `And`/`Or` are kept flattened, duplicate-free and
/// sorted; build them through [`ConceptExpr::and`] and [`ConceptExpr::or`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConceptExpr {
    Top,
    Bottom,
    Atomic(ConceptName),
    Not(Box<ConceptExpr>),
    And(Vec<ConceptExpr>),
    Or(Vec<ConceptExpr>),
    Exists(RoleName, Box<ConceptExpr>),
    Forall(RoleName, Box<ConceptExpr>),
}

impl ConceptExpr {
    pub fn atom(name: &str) -> Self {
        ConceptExpr::Atomic(ConceptName::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(c))
    }

    pub fn exists(role: RoleName, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists(role, Box::new(filler))
    }

    pub fn forall(role: RoleName, filler: ConceptExpr) -> Self {
        ConceptExpr::Forall(role, Box::new(filler))
    }

    /// Canonical conjunction. An empty conjunction is `Top`; a singleton
    /// collapses to its element.
    pub fn and<I: IntoIterator<Item = ConceptExpr>>(parts: I) -> Self {
        let mut items = Vec::new();
        for p in parts {
            match p {
                ConceptExpr::And(inner) => items.extend(inner),
                other => items.push(other),
            }
        }
        items.sort();
        items.dedup();
        match items.len() {
            0 => ConceptExpr::Top,
            1 => items.pop().unwrap(),
            _ => ConceptExpr::And(items),
        }
    }

    /// Canonical disjunction. An empty disjunction is `Bottom`.
    pub fn or<I: IntoIterator<Item = ConceptExpr>>(parts: I) -> Self {
        let mut items = Vec::new();
        for p in parts {
            match p {
                ConceptExpr::Or(inner) => items.extend(inner),
                other => items.push(other),
            }
        }
        items.sort();
        items.dedup();
        match items.len() {
            0 => ConceptExpr::Bottom,
            1 => items.pop().unwrap(),
            _ => ConceptExpr::Or(items),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, ConceptExpr::Atomic(_))
    }

    pub fn as_atomic(&self) -> Option<&ConceptName> {
        match self {
            ConceptExpr::Atomic(a) => Some(a),
            _ => None,
        }
    }

    /// Direct subexpressions.
    pub fn children(&self) -> Vec<&ConceptExpr> {
        match self {
            ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Atomic(_) => Vec::new(),
            ConceptExpr::Not(c) | ConceptExpr::Exists(_, c) | ConceptExpr::Forall(_, c) => {
                vec![c.as_ref()]
            }
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) => cs.iter().collect(),
        }
    }

    /// Visits this expression and all of its subexpressions, parents first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ConceptExpr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Rebuilds the expression with renamed symbols, re-canonicalizing
    /// conjunctions and disjunctions.
    pub fn map_names(
        &self,
        concept: &impl Fn(&ConceptName) -> ConceptExpr,
        role: &impl Fn(&RoleName) -> RoleName,
    ) -> ConceptExpr {
        match self {
            ConceptExpr::Top => ConceptExpr::Top,
            ConceptExpr::Bottom => ConceptExpr::Bottom,
            ConceptExpr::Atomic(a) => concept(a),
            ConceptExpr::Not(c) => ConceptExpr::not(c.map_names(concept, role)),
            ConceptExpr::And(cs) => ConceptExpr::and(cs.iter().map(|c| c.map_names(concept, role))),
            ConceptExpr::Or(cs) => ConceptExpr::or(cs.iter().map(|c| c.map_names(concept, role))),
            ConceptExpr::Exists(r, c) => ConceptExpr::exists(role(r), c.map_names(concept, role)),
            ConceptExpr::Forall(r, c) => ConceptExpr::forall(role(r), c.map_names(concept, role)),
        }
    }

    /// Replaces every occurrence of concept name `x` by `by`.
    pub fn substitute(&self, x: &ConceptName, by: &ConceptExpr) -> ConceptExpr {
        self.map_names(
            &|a| {
                if a == x {
                    by.clone()
                } else {
                    ConceptExpr::Atomic(a.clone())
                }
            },
            &|r| r.clone(),
        )
    }

    /// Negation normal form of `self` (or of its negation when `negate`).
    pub fn nnf(&self, negate: bool) -> ConceptExpr {
        use ConceptExpr::*;
        match (self, negate) {
            (Top, false) | (Bottom, true) => Top,
            (Top, true) | (Bottom, false) => Bottom,
            (Atomic(_), false) => self.clone(),
            (Atomic(_), true) => ConceptExpr::not(self.clone()),
            (Not(c), n) => c.nnf(!n),
            (And(cs), false) => ConceptExpr::and(cs.iter().map(|c| c.nnf(false))),
            (And(cs), true) => ConceptExpr::or(cs.iter().map(|c| c.nnf(true))),
            (Or(cs), false) => ConceptExpr::or(cs.iter().map(|c| c.nnf(false))),
            (Or(cs), true) => ConceptExpr::and(cs.iter().map(|c| c.nnf(true))),
            (Exists(r, c), false) => ConceptExpr::exists(r.clone(), c.nnf(false)),
            (Exists(r, c), true) => ConceptExpr::forall(r.clone(), c.nnf(true)),
            (Forall(r, c), false) => ConceptExpr::forall(r.clone(), c.nnf(false)),
            (Forall(r, c), true) => ConceptExpr::exists(r.clone(), c.nnf(true)),
        }
    }

    /// Number of symbol occurrences: names, `⊤`, `⊥` and connectives.
    pub fn weight(&self) -> u64 {
        match self {
            ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Atomic(_) => 1,
            ConceptExpr::Not(c) => 1 + c.weight(),
            ConceptExpr::And(cs) | ConceptExpr::Or(cs) => {
                cs.iter().map(|c| c.weight()).sum::<u64>() + cs.len() as u64 - 1
            }
            ConceptExpr::Exists(_, c) | ConceptExpr::Forall(_, c) => 2 + c.weight(),
        }
    }

    pub fn mentions_concept(&self, x: &ConceptName) -> bool {
        let mut found = false;
        self.walk(&mut |c| {
            if let ConceptExpr::Atomic(a) = c {
                found |= a == x;
            }
        });
        found
    }

    pub fn mentions_role(&self, r: &RoleName) -> bool {
        let mut found = false;
        self.walk(&mut |c| {
            if let ConceptExpr::Exists(s, _) | ConceptExpr::Forall(s, _) = c {
                found |= s == r;
            }
        });
        found
    }

    fn is_elh(&self) -> bool {
        match self {
            ConceptExpr::Top | ConceptExpr::Atomic(_) => true,
            ConceptExpr::And(cs) => cs.iter().all(|c| c.is_elh()),
            ConceptExpr::Exists(_, c) => c.is_elh(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    ConceptInclusion { lhs: ConceptExpr, rhs: ConceptExpr },
    RoleInclusion { sub: RoleName, sup: RoleName },
}

impl Axiom {
    pub fn ci(lhs: ConceptExpr, rhs: ConceptExpr) -> Self {
        Axiom::ConceptInclusion { lhs, rhs }
    }

    /// `A ⊑ B` between two concept names.
    pub fn atomic(a: &str, b: &str) -> Self {
        Axiom::ci(ConceptExpr::atom(a), ConceptExpr::atom(b))
    }

    pub fn ri(sub: &str, sup: &str) -> Self {
        Axiom::RoleInclusion { sub: RoleName::new(sub), sup: RoleName::new(sup) }
    }

    pub fn is_atomic_ci(&self) -> bool {
        matches!(self, Axiom::ConceptInclusion { lhs, rhs } if lhs.is_atomic() && rhs.is_atomic())
    }

    /// For an atomic CI, the pair of names.
    pub fn atomic_parts(&self) -> Option<(&ConceptName, &ConceptName)> {
        match self {
            Axiom::ConceptInclusion { lhs: ConceptExpr::Atomic(a), rhs: ConceptExpr::Atomic(b) } => {
                Some((a, b))
            }
            _ => None,
        }
    }

    /// `C ⊑ C`, `C ⊑ ⊤`, `⊥ ⊑ C`, or a reflexive role inclusion.
    pub fn is_tautology(&self) -> bool {
        match self {
            Axiom::ConceptInclusion { lhs, rhs } => {
                lhs == rhs || *rhs == ConceptExpr::Top || *lhs == ConceptExpr::Bottom
            }
            Axiom::RoleInclusion { sub, sup } => sub == sup,
        }
    }

    pub fn is_elh(&self) -> bool {
        match self {
            Axiom::ConceptInclusion { lhs, rhs } => lhs.is_elh() && rhs.is_elh(),
            Axiom::RoleInclusion { .. } => true,
        }
    }

    /// Symbol-occurrence count: both sides plus one for `⊑`.
    pub fn weight(&self) -> u64 {
        match self {
            Axiom::ConceptInclusion { lhs, rhs } => lhs.weight() + rhs.weight() + 1,
            Axiom::RoleInclusion { .. } => 3,
        }
    }

    pub fn mentions(&self, s: &Symbol) -> bool {
        match (self, s) {
            (Axiom::ConceptInclusion { lhs, rhs }, Symbol::Concept(x)) => {
                lhs.mentions_concept(x) || rhs.mentions_concept(x)
            }
            (Axiom::ConceptInclusion { lhs, rhs }, Symbol::Role(r)) => {
                lhs.mentions_role(r) || rhs.mentions_role(r)
            }
            (Axiom::RoleInclusion { .. }, Symbol::Concept(_)) => false,
            (Axiom::RoleInclusion { sub, sup }, Symbol::Role(r)) => sub == r || sup == r,
        }
    }

    pub fn map_names(
        &self,
        concept: &impl Fn(&ConceptName) -> ConceptExpr,
        role: &impl Fn(&RoleName) -> RoleName,
    ) -> Axiom {
        match self {
            Axiom::ConceptInclusion { lhs, rhs } => {
                Axiom::ci(lhs.map_names(concept, role), rhs.map_names(concept, role))
            }
            Axiom::RoleInclusion { sub, sup } => Axiom::RoleInclusion { sub: role(sub), sup: role(sup) },
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("duplicate axiom {0}")]
pub struct DuplicateAxiom(pub String);

/// Description-logic fragment of an ontology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Fragment {
    #[serde(rename = "ELH")]
    Elh,
    #[serde(rename = "ALCH")]
    Alch,
    #[serde(rename = "OTHER")]
    Other,
}

impl Fragment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Fragment::Elh => "ELH",
            Fragment::Alch => "ALCH",
            Fragment::Other => "OTHER",
        }
    }

    /// ELH is contained in ALCH.
    pub fn within_alch(&self) -> bool {
        matches!(self, Fragment::Elh | Fragment::Alch)
    }
}

/// An ordered, duplicate-free set of axioms.
#[derive(Clone, Default)]
pub struct Ontology {
    name: String,
    axioms: Vec<Axiom>,
    index: HashSet<Axiom>,
}

impl Ontology {
    pub fn new(name: impl Into<String>) -> Self {
        Ontology { name: name.into(), axioms: Vec::new(), index: HashSet::new() }
    }

    /// Builds an ontology, silently skipping repeated axioms.
    pub fn from_axioms<I: IntoIterator<Item = Axiom>>(name: impl Into<String>, axioms: I) -> Self {
        let mut o = Ontology::new(name);
        for a in axioms {
            o.insert(a);
        }
        o
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn push(&mut self, a: Axiom) -> Result<(), DuplicateAxiom> {
        if self.index.contains(&a) {
            return Err(DuplicateAxiom(crate::render::functional(&a)));
        }
        self.index.insert(a.clone());
        self.axioms.push(a);
        Ok(())
    }

    /// Appends `a` unless present; returns whether it was added.
    pub fn insert(&mut self, a: Axiom) -> bool {
        self.push(a).is_ok()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Axiom> {
        self.axioms.iter()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn contains(&self, a: &Axiom) -> bool {
        self.index.contains(a)
    }

    pub fn without(&self, a: &Axiom) -> Ontology {
        Ontology::from_axioms(self.name.clone(), self.axioms.iter().filter(|b| *b != a).cloned())
    }

    pub fn fragment(&self) -> Fragment {
        if self.axioms.iter().all(Axiom::is_elh) {
            Fragment::Elh
        } else {
            // Every constructor the syntax admits is within ALCH.
            Fragment::Alch
        }
    }

    /// Set equality on axioms, ignoring order and name.
    pub fn same_axioms(&self, other: &Ontology) -> bool {
        self.index == other.index
    }

    /// Stable key for caching: sorted functional renderings.
    pub fn canonical_key(&self) -> String {
        let mut lines: Vec<String> = self.axioms.iter().map(crate::render::functional).collect();
        lines.sort();
        lines.join("\n")
    }

    /// Total number of symbol occurrences over all axioms.
    pub fn weight(&self) -> u64 {
        self.axioms.iter().map(Axiom::weight).sum()
    }
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.axioms == other.axioms
    }
}
impl Eq for Ontology {}

impl fmt::Debug for Ontology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.axioms.iter().map(crate::render::pretty)).finish()
    }
}

impl<'a> IntoIterator for &'a Ontology {
    type Item = &'a Axiom;
    type IntoIter = std::slice::Iter<'a, Axiom>;
    fn into_iter(self) -> Self::IntoIter {
        self.axioms.iter()
    }
}

/// A set of concept and role names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub roles: BTreeSet<RoleName>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of<T: HasSignature + ?Sized>(x: &T) -> Signature {
        let mut s = Signature::new();
        x.collect_signature(&mut s);
        s
    }

    /// Concept names given as strings.
    pub fn from_concepts<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Self {
        Signature { concepts: names.into_iter().map(ConceptName::new).collect(), roles: BTreeSet::new() }
    }

    pub fn insert(&mut self, s: Symbol) {
        match s {
            Symbol::Concept(c) => {
                self.concepts.insert(c);
            }
            Symbol::Role(r) => {
                self.roles.insert(r);
            }
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match s {
            Symbol::Concept(c) => self.concepts.contains(c),
            Symbol::Role(r) => self.roles.contains(r),
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len() + self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concepts.is_subset(&other.concepts) && self.roles.is_subset(&other.roles)
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.union(&other.concepts).cloned().collect(),
            roles: self.roles.union(&other.roles).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.intersection(&other.concepts).cloned().collect(),
            roles: self.roles.intersection(&other.roles).cloned().collect(),
        }
    }

    /// All symbols, concepts first, each kind in name order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.concepts
            .iter()
            .cloned()
            .map(Symbol::Concept)
            .chain(self.roles.iter().cloned().map(Symbol::Role))
    }
}

pub trait HasSignature {
    fn collect_signature(&self, sig: &mut Signature);

    fn signature(&self) -> Signature {
        let mut s = Signature::new();
        self.collect_signature(&mut s);
        s
    }
}

impl HasSignature for ConceptExpr {
    fn collect_signature(&self, sig: &mut Signature) {
        self.walk(&mut |c| match c {
            ConceptExpr::Atomic(a) => {
                sig.concepts.insert(a.clone());
            }
            ConceptExpr::Exists(r, _) | ConceptExpr::Forall(r, _) => {
                sig.roles.insert(r.clone());
            }
            _ => {}
        });
    }
}

impl HasSignature for Axiom {
    fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Axiom::ConceptInclusion { lhs, rhs } => {
                lhs.collect_signature(sig);
                rhs.collect_signature(sig);
            }
            Axiom::RoleInclusion { sub, sup } => {
                sig.roles.insert(sub.clone());
                sig.roles.insert(sup.clone());
            }
        }
    }
}

impl HasSignature for Ontology {
    fn collect_signature(&self, sig: &mut Signature) {
        for a in &self.axioms {
            a.collect_signature(sig);
        }
    }
}

impl HasSignature for [Axiom] {
    fn collect_signature(&self, sig: &mut Signature) {
        for a in self {
            a.collect_signature(sig);
        }
    }
}

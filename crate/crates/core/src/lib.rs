//! Proof generation for description-logic entailments.
//!
//! The crate covers the ELH and ALCH fragments: parsing and rendering,
//! consequence-based saturation, a tableau entailment check, justification
//! extraction, forgetting, optimal proof extraction with signature-based
//! condensation, forgetting-based proof search, and a small experiment
//! harness.

pub mod bench;
pub mod derivation;
pub mod elh;
pub mod fbp;
pub mod forget;
pub mod generate;
pub mod justify;
pub mod par;
pub mod parse;
pub mod pattern;
pub mod proof;
pub mod render;
pub mod syntax;
pub mod tableau;

pub use derivation::{DerivationStructure, Inference, InferenceRule, VertexId};
pub use parse::{parse_axiom, parse_ontology, parse_signature, ParseError};
pub use render::{render_axiom, RenderStyle};
pub use syntax::{Axiom, ConceptExpr, ConceptName, Fragment, HasSignature, Ontology, RoleName, Signature, Symbol};

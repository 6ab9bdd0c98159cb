//! Stratified formulas, their sorted counterparts, Gödel codes, hereditarily
//! finite sets, well-founded extensional graphs and finite models of the
//! simple theory of types.

pub mod axioms;
pub mod bfext;
pub mod fragment;
pub mod generate;
pub mod godel;
pub mod hf;
pub mod parser;
pub mod sat;
pub mod stratify;
pub mod syntax;
pub mod typed;

pub use axioms::{is_axiom, is_axiom_untyped, TheoryId};
pub use bfext::{BfType, BfextGraph};
pub use fragment::{build_fragment, BfFragment};
pub use godel::{decode_any, decode_formula, encode_formula, GodelCode, Language};
pub use hf::HfSet;
pub use parser::{parse_formula, parse_typed_formula, ParseError};
pub use sat::{evaluate, FiniteStructure};
pub use stratify::{is_stratified, stratify, Stratification, UnstratifiabilityWitness};
pub use syntax::{Formula, Term, TypedVar, Var, Variable};

pub type TypedFormula = Formula<TypedVar>;

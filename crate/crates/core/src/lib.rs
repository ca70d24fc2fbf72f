//! Exact preradicals, flows and algebraic entropy for finitely presented
//! modules over `Z` and `Z/n`, plus the Bernoulli-type shift modules
//! `⊕_{i ∈ N} B` over a finite block `B`.

pub mod battery;
pub mod entropy;
pub mod error;
pub mod flow;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod module;
pub mod morphism;
pub mod options;
pub mod preradical;
pub mod ring;
pub mod submodule;

pub use battery::Battery;
pub use entropy::invariant::{invariant, invariant_of_module, InvariantTag};
pub use entropy::norm::{LogCombination, NormValue, Symbol};
pub use error::{Error, Result};
pub use flow::{
    alpha_flow, canonical_subflow, induce_flow_preradical, is_flow_mono, is_flow_morphism, omega_flow, project_flow_preradical, Flow, SubFlow,
};
pub use hom::{enumerate_endomorphisms, enumerate_homs, flow_hom_generators, hom_generators};
pub use matrix::{smith_normal_form, Matrix, SmithForm};
pub use module::{present_module, Cardinality, Element, ModuleObject, Shape};
pub use lattice::{
    enumerate_submodules, enumerate_within, lattice_morphism, normed_semilattice, semilattice_map,
    LatticeMorphism, NormedSemilattice, SemilatticeMap, SubmoduleLattice,
};
pub use morphism::{Morphism, MorphismBody, ShiftTerm};
pub use options::Options;
pub use preradical::{
    check_naturality, compare_preradicals, eval_preradical, parse_preradical, parse_with, GeneratingPair,
    NameTable, NaturalityReport, Order, OrderVerdict, PreradicalExpr,
};
pub use ring::RingSpec;
pub use submodule::{image_of, kernel, preimage_of, quotient, Embedding, Submodule, Support};

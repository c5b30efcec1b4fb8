//! Repair of typed graphs against nested graph constraints.
//!
//! The crate is organised bottom-up: [`graph`] provides typed graphs and
//! morphism search, [`condition`] nested conditions with their
//! transformations, [`program`] rules and graph programs, [`repair`] the
//! synthesis of repair programs and [`emf`] the EMF-specific constraint
//! schemas and model completion.

pub mod condition;
pub mod emf;
pub mod graph;
mod id;
pub mod petri;
pub mod program;
pub mod repair;

pub use condition::{Condition, ConditionClass, ConditionError};
pub use graph::{Edge, GraphBound, GraphBuilder, GraphError, Morphism, Node, PartialMorphism, TypeGraph, TypedGraph};
pub use id::Id;
pub use program::{LocatedGraph, Program, Rule};
pub use repair::{RepairPlan, SynthesisOptions};

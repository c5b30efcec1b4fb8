mod enumerate;
mod iso;
mod matching;
mod morphism;
mod subgraph;
mod type_graph;
mod typed;

pub use enumerate::{all_typed_graphs, random_typed_graph, GraphBound};
pub use iso::{are_isomorphic, find_isomorphism, located_isomorphic, IsoSet};
pub use matching::{enumerate_extensions, enumerate_morphisms, for_each_match, has_match};
pub use morphism::{Morphism, PartialMorphism};
pub use subgraph::subgraphs_between;
pub use type_graph::{
    containment_pairs, validate_type_graph, validate_typed_graph, TypeEdge, TypeGraph, TypeViolation, TypingViolation,
};
pub use typed::{Edge, GraphBuilder, Node, TypedGraph};

use crate::id::Id;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(Id),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(Id),
    #[error("edge `{edge}` refers to unknown node `{endpoint}`")]
    DanglingEdge { edge: Id, endpoint: Id },
    #[error("item `{0}` occurs in both graphs with different type or incidence")]
    Conflict(Id),
    #[error("`{0}` is not a subgraph of the given graph")]
    NotSubgraph(String),
    #[error("inclusion is not real: both graphs are equal")]
    NotReal,
}

//! Inputs shared by the benchmarks.

use graph_mend_core::{petri, Condition, TypedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn place() -> TypedGraph {
    TypedGraph::builder().node("p", "Pl").build().unwrap()
}

pub fn place_with_token() -> TypedGraph {
    TypedGraph::builder()
        .node("p", "Pl")
        .node("t", "Tk")
        .edge("e", "tok", "p", "t")
        .build()
        .unwrap()
}

pub fn two_containers() -> TypedGraph {
    TypedGraph::builder()
        .node("p1", "Pl")
        .node("p2", "Pl")
        .node("t", "Tk")
        .edge("e1", "tok", "p1", "t")
        .edge("e2", "tok", "p2", "t")
        .build()
        .unwrap()
}

pub fn every_place_has_token() -> Condition {
    Condition::forall(
        &TypedGraph::empty(),
        place(),
        Condition::exists_plain(&place(), place_with_token()).unwrap(),
    )
    .unwrap()
}

pub fn one_container() -> Condition {
    Condition::not_exists(&TypedGraph::empty(), two_containers()).unwrap()
}

/// `places` places and as many tokens, each token held by two places in a
/// ring, and every third place empty.
pub fn token_ring(places: usize) -> TypedGraph {
    let mut b = TypedGraph::builder();
    for i in 0..places {
        b.add_node(format!("p{i:03}").into(), "Pl".into());
        b.add_node(format!("t{i:03}").into(), "Tk".into());
    }
    for i in (0..places).filter(|i| i % 3 != 0) {
        b.add_edge(
            format!("a{i:03}").into(),
            "tok".into(),
            format!("p{i:03}").into(),
            format!("t{i:03}").into(),
        );
        let next = (i + 1) % places;
        b.add_edge(
            format!("b{i:03}").into(),
            "tok".into(),
            format!("p{next:03}").into(),
            format!("t{i:03}").into(),
        );
    }
    b.build().unwrap()
}

pub fn random_graphs(seed: u64, count: usize, max_nodes: usize, max_edges: usize) -> Vec<TypedGraph> {
    let tg = petri::type_graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| graph_mend_core::graph::random_typed_graph(&tg, &mut rng, max_nodes, max_edges))
        .collect()
}

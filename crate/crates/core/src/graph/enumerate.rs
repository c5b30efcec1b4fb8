use rand::Rng;

use crate::{
    graph::{IsoSet, TypeGraph, TypedGraph},
    id::Id,
};

/// Size limits for exhaustive graph enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphBound {
    pub max_nodes: usize,
    pub max_edges: usize,
    /// Maximal number of parallel edges of one type between two nodes.
    pub max_parallel: usize,
}

impl GraphBound {
    pub fn new(max_nodes: usize, max_edges: usize, max_parallel: usize) -> Self {
        GraphBound {
            max_nodes,
            max_edges,
            max_parallel,
        }
    }
}

/// Every graph typed over `tg` within `bound`, one per isomorphism class,
/// by increasing node count and then edge count.
///
/// Returns `Err(n)` once more than `limit` candidates have been produced.
pub fn all_typed_graphs(tg: &TypeGraph, bound: GraphBound, limit: usize) -> Result<Vec<TypedGraph>, usize> {
    let mut seen = IsoSet::new();
    let mut produced = 0usize;
    let names: Vec<Id> = (0..bound.max_nodes).map(|i| Id::from(format!("n{i}"))).collect();
    for n in 0..=bound.max_nodes {
        let mut batch: Vec<TypedGraph> = Vec::new();
        let mut types = vec![0usize; n];
        loop {
            if tg.nodes.is_empty() && n > 0 {
                break;
            }
            let slots: Vec<(usize, usize, usize)> = tg
                .edges
                .iter()
                .enumerate()
                .flat_map(|(t, te)| {
                    let types = &types;
                    (0..n)
                        .flat_map(move |s| (0..n).map(move |d| (t, s, d)))
                        .filter(move |&(_, s, d)| tg.nodes[types[s]] == te.src && tg.nodes[types[d]] == te.tgt)
                })
                .collect();
            let mut mult = vec![0usize; slots.len()];
            loop {
                produced += 1;
                if produced > limit {
                    return Err(produced);
                }
                batch.push(build(tg, &names, &types, &slots, &mult));
                if !next_multiplicity(&mut mult, bound) {
                    break;
                }
            }
            if !next_multiset(&mut types, tg.nodes.len()) {
                break;
            }
        }
        batch.sort_by_key(|g| g.edge_count());
        for g in batch {
            seen.insert(g);
        }
    }
    Ok(seen.graphs().cloned().collect())
}

fn build(tg: &TypeGraph, names: &[Id], types: &[usize], slots: &[(usize, usize, usize)], mult: &[usize]) -> TypedGraph {
    let mut b = TypedGraph::builder();
    for (i, &t) in types.iter().enumerate() {
        b.add_node(names[i].clone(), tg.nodes[t].clone());
    }
    let mut k = 0;
    for (slot, &m) in slots.iter().zip(mult) {
        for _ in 0..m {
            b.add_edge(
                format!("e{k}").into(),
                tg.edges[slot.0].id.clone(),
                names[slot.1].clone(),
                names[slot.2].clone(),
            );
            k += 1;
        }
    }
    b.build().expect("generated graphs are well formed")
}

fn next_multiplicity(mult: &mut [usize], bound: GraphBound) -> bool {
    let mut total: usize = mult.iter().sum();
    for m in mult.iter_mut() {
        if *m < bound.max_parallel && total < bound.max_edges {
            *m += 1;
            return true;
        }
        total -= *m;
        *m = 0;
    }
    false
}

fn next_multiset(types: &mut [usize], k: usize) -> bool {
    // non-decreasing sequences over 0..k
    for i in (0..types.len()).rev() {
        if types[i] + 1 < k {
            let v = types[i] + 1;
            for t in &mut types[i..] {
                *t = v;
            }
            return true;
        }
    }
    false
}

/// A random graph typed over `tg` with at most the given number of nodes
/// and edges. Parallel edges and loops occur whenever the type graph allows
/// them.
pub fn random_typed_graph<R: Rng + ?Sized>(
    tg: &TypeGraph,
    rng: &mut R,
    max_nodes: usize,
    max_edges: usize,
) -> TypedGraph {
    let mut b = TypedGraph::builder();
    if tg.nodes.is_empty() {
        return TypedGraph::empty();
    }
    let n = rng.random_range(0..=max_nodes);
    let types: Vec<&Id> = (0..n).map(|_| &tg.nodes[rng.random_range(0..tg.nodes.len())]).collect();
    let names: Vec<Id> = (0..n).map(|i| Id::from(format!("n{i}"))).collect();
    for (name, ty) in names.iter().zip(&types) {
        b.add_node(name.clone(), (*ty).clone());
    }
    let usable: Vec<_> = tg
        .edges
        .iter()
        .filter(|te| types.contains(&&te.src) && types.contains(&&te.tgt))
        .collect();
    if !usable.is_empty() {
        let m = rng.random_range(0..=max_edges);
        for k in 0..m {
            let te = usable[rng.random_range(0..usable.len())];
            let pick = |rng: &mut R, ty: &Id| {
                let cands: Vec<usize> = (0..n).filter(|&i| types[i] == ty).collect();
                cands[rng.random_range(0..cands.len())]
            };
            let s = pick(rng, &te.src);
            let t = pick(rng, &te.tgt);
            b.add_edge(
                format!("e{k}").into(),
                te.id.clone(),
                names[s].clone(),
                names[t].clone(),
            );
        }
    }
    b.build().expect("generated graphs are well formed")
}

use std::{
    collections::{hash_map::DefaultHasher, HashMap},
    hash::{Hash, Hasher},
};

use crate::graph::{has_match, matching::for_each_match, Morphism, PartialMorphism, TypedGraph};

pub fn find_isomorphism(g: &TypedGraph, h: &TypedGraph) -> Option<Morphism> {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() || invariant(g, None) != invariant(h, None)
    {
        return None;
    }
    let mut found = None;
    let _ = for_each_match(g, h, &PartialMorphism::undefined(g.node_count(), g.edge_count()), |m| {
        found = Some(m.clone());
        std::ops::ControlFlow::Break(())
    });
    found
}

pub fn are_isomorphic(g: &TypedGraph, h: &TypedGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Isomorphism of graphs together with an interface: some iso `φ: g -> h`
/// with `φ ∘ gi = hi`.
pub fn located_isomorphic(g: &TypedGraph, gi: &Morphism, h: &TypedGraph, hi: &Morphism) -> bool {
    if g.node_count() != h.node_count()
        || g.edge_count() != h.edge_count()
        || gi.nodes.len() != hi.nodes.len()
        || gi.edges.len() != hi.edges.len()
    {
        return false;
    }
    let fixed = gi.inverse(g.node_count(), g.edge_count()).then_total(hi);
    has_match(g, h, &fixed)
}

fn invariant(g: &TypedGraph, iface: Option<&Morphism>) -> u64 {
    let mut sig: Vec<(&str, usize, usize, usize)> = (0..g.node_count())
        .map(|v| {
            let loops = g.out_edges(v).iter().filter(|&&e| g.edge(e).tgt == v).count();
            (g.node(v).ty.as_str(), g.out_edges(v).len(), g.in_edges(v).len(), loops)
        })
        .collect();
    sig.sort_unstable();
    let mut edge_types: Vec<&str> = g.edges().iter().map(|e| e.ty.as_str()).collect();
    edge_types.sort_unstable();
    let mut hasher = DefaultHasher::new();
    sig.hash(&mut hasher);
    edge_types.hash(&mut hasher);
    if let Some(m) = iface {
        for &v in &m.nodes {
            (g.out_edges(v).len(), g.in_edges(v).len()).hash(&mut hasher);
        }
        m.edges.len().hash(&mut hasher);
    }
    hasher.finish()
}

/// A set of graphs (optionally with interfaces) up to isomorphism, keeping
/// the first representative of each class in insertion order.
#[derive(Default, Clone, Debug)]
pub struct IsoSet {
    items: Vec<(TypedGraph, Morphism)>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl IsoSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `g`; returns false if an isomorphic graph is already present.
    pub fn insert(&mut self, g: TypedGraph) -> bool {
        self.insert_located(g, Morphism::empty())
    }

    pub fn contains(&self, g: &TypedGraph) -> bool {
        self.find_located(g, &Morphism::empty()).is_some()
    }

    pub fn insert_located(&mut self, g: TypedGraph, iface: Morphism) -> bool {
        if self.find_located(&g, &iface).is_some() {
            return false;
        }
        let key = invariant(&g, Some(&iface));
        self.buckets.entry(key).or_default().push(self.items.len());
        self.items.push((g, iface));
        true
    }

    pub fn find_located(&self, g: &TypedGraph, iface: &Morphism) -> Option<usize> {
        let key = invariant(g, Some(iface));
        self.buckets.get(&key)?.iter().copied().find(|&i| {
            let (h, hi) = &self.items[i];
            located_isomorphic(g, iface, h, hi)
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &TypedGraph> {
        self.items.iter().map(|(g, _)| g)
    }

    pub fn into_located(self) -> Vec<(TypedGraph, Morphism)> {
        self.items
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(ids: [&str; 3]) -> TypedGraph {
        TypedGraph::builder()
            .node(ids[0], "N")
            .node(ids[1], "N")
            .node(ids[2], "N")
            .edge("x", "r", ids[0], ids[1])
            .edge("y", "r", ids[1], ids[2])
            .build()
            .unwrap()
    }

    #[test]
    fn renamed_graphs_are_isomorphic() {
        let g = path(["a", "b", "c"]);
        let h = path(["c", "a", "b"]);
        let phi = find_isomorphism(&g, &h).unwrap();
        assert!(phi.is_valid(&g, &h));
        let rev = path(["c", "b", "a"]);
        assert!(are_isomorphic(&g, &rev));
    }

    #[test]
    fn different_orientation_is_not_isomorphic() {
        let g = path(["a", "b", "c"]);
        let star = TypedGraph::builder()
            .node("a", "N")
            .node("b", "N")
            .node("c", "N")
            .edge("x", "r", "a", "b")
            .edge("y", "r", "a", "c")
            .build()
            .unwrap();
        assert!(!are_isomorphic(&g, &star));
    }

    #[test]
    fn interface_distinguishes_positions() {
        let g = path(["a", "b", "c"]);
        let start = Morphism {
            nodes: vec![0],
            edges: vec![],
        };
        let end = Morphism {
            nodes: vec![2],
            edges: vec![],
        };
        assert!(!located_isomorphic(&g, &start, &g, &end));
        let mut set = IsoSet::new();
        assert!(set.insert_located(g.clone(), start.clone()));
        assert!(set.insert_located(g.clone(), end));
        assert!(!set.insert_located(g, start));
        assert_eq!(set.len(), 2);
    }
}

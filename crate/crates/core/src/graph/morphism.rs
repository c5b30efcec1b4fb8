use crate::graph::TypedGraph;

/// A map between two graphs given by item positions.
///
/// The domain and codomain are not stored; callers keep track of them.
/// Position `i` of `nodes` holds the image of domain node `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Morphism {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Morphism {
    pub fn identity(g: &TypedGraph) -> Self {
        Morphism {
            nodes: (0..g.node_count()).collect(),
            edges: (0..g.edge_count()).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Morphism) -> Morphism {
        Morphism {
            nodes: self.nodes.iter().map(|&v| then.nodes[v]).collect(),
            edges: self.edges.iter().map(|&e| then.edges[e]).collect(),
        }
    }

    /// Checks totality, injectivity, incidence and typing.
    pub fn is_valid(&self, dom: &TypedGraph, cod: &TypedGraph) -> bool {
        if self.nodes.len() != dom.node_count() || self.edges.len() != dom.edge_count() {
            return false;
        }
        let mut used = vec![false; cod.node_count()];
        for (i, &v) in self.nodes.iter().enumerate() {
            if v >= cod.node_count() || used[v] || cod.node(v).ty != dom.node(i).ty {
                return false;
            }
            used[v] = true;
        }
        let mut used = vec![false; cod.edge_count()];
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= cod.edge_count() || used[e] {
                return false;
            }
            used[e] = true;
            let (de, ce) = (dom.edge(i), cod.edge(e));
            if ce.ty != de.ty || ce.src != self.nodes[de.src] || ce.tgt != self.nodes[de.tgt] {
                return false;
            }
        }
        true
    }

    pub fn to_partial(&self) -> PartialMorphism {
        PartialMorphism {
            nodes: self.nodes.iter().map(|&v| Some(v)).collect(),
            edges: self.edges.iter().map(|&e| Some(e)).collect(),
        }
    }

    /// Inverse as a partial map on a codomain with the given sizes.
    pub fn inverse(&self, cod_nodes: usize, cod_edges: usize) -> PartialMorphism {
        let mut inv = PartialMorphism::undefined(cod_nodes, cod_edges);
        for (i, &v) in self.nodes.iter().enumerate() {
            inv.nodes[v] = Some(i);
        }
        for (i, &e) in self.edges.iter().enumerate() {
            inv.edges[e] = Some(i);
        }
        inv
    }

    /// Readable `id -> id` rendering of the node and edge maps.
    pub fn describe(&self, dom: &TypedGraph, cod: &TypedGraph) -> String {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{}->{}", dom.node(i).id, cod.node(v).id));
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &e)| format!("{}->{}", dom.edge(i).id, cod.edge(e).id));
        nodes.chain(edges).collect::<Vec<_>>().join(", ")
    }
}

/// A partial injective map, `None` where undefined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartialMorphism {
    pub nodes: Vec<Option<usize>>,
    pub edges: Vec<Option<usize>>,
}

impl PartialMorphism {
    pub fn undefined(nodes: usize, edges: usize) -> Self {
        PartialMorphism {
            nodes: vec![None; nodes],
            edges: vec![None; edges],
        }
    }

    pub fn identity(g: &TypedGraph) -> Self {
        Morphism::identity(g).to_partial()
    }

    /// Relational composition `then ∘ self`.
    pub fn then(&self, then: &PartialMorphism) -> PartialMorphism {
        PartialMorphism {
            nodes: self.nodes.iter().map(|v| v.and_then(|v| then.nodes[v])).collect(),
            edges: self.edges.iter().map(|e| e.and_then(|e| then.edges[e])).collect(),
        }
    }

    pub fn then_total(&self, then: &Morphism) -> PartialMorphism {
        PartialMorphism {
            nodes: self.nodes.iter().map(|v| v.map(|v| then.nodes[v])).collect(),
            edges: self.edges.iter().map(|e| e.map(|e| then.edges[e])).collect(),
        }
    }

    pub fn is_total(&self) -> bool {
        self.nodes.iter().all(Option::is_some) && self.edges.iter().all(Option::is_some)
    }

    pub fn to_total(&self) -> Option<Morphism> {
        Some(Morphism {
            nodes: self.nodes.iter().copied().collect::<Option<_>>()?,
            edges: self.edges.iter().copied().collect::<Option<_>>()?,
        })
    }

    pub fn defined_count(&self) -> usize {
        self.nodes.iter().flatten().count() + self.edges.iter().flatten().count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> TypedGraph {
        TypedGraph::builder()
            .node("a", "Pl")
            .node("b", "Tk")
            .edge("e", "tok", "a", "b")
            .build()
            .unwrap()
    }

    #[test]
    fn identity_is_valid() {
        let g = g();
        assert!(Morphism::identity(&g).is_valid(&g, &g));
    }

    #[test]
    fn swapped_nodes_break_typing() {
        let g = g();
        let m = Morphism {
            nodes: vec![1, 0],
            edges: vec![0],
        };
        assert!(!m.is_valid(&g, &g));
    }

    #[test]
    fn partial_composition_propagates_undefined() {
        let f = PartialMorphism {
            nodes: vec![Some(1), None],
            edges: vec![],
        };
        let h = PartialMorphism {
            nodes: vec![None, Some(0)],
            edges: vec![],
        };
        assert_eq!(f.then(&h).nodes, vec![Some(0), None]);
        assert!(!f.is_total());
        assert_eq!(f.defined_count(), 1);
    }

    #[test]
    fn inverse_round_trips() {
        let m = Morphism {
            nodes: vec![2, 0],
            edges: vec![1],
        };
        let inv = m.inverse(3, 2);
        assert_eq!(inv.nodes, vec![Some(1), None, Some(0)]);
        assert_eq!(m.to_partial().then(&inv), PartialMorphism::identity(&g()));
    }
}

use std::{
    collections::BTreeSet,
    fmt,
    hash::{Hash, Hasher},
};

use crate::{
    graph::{GraphError, Morphism},
    id::{fresh_id, Id},
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub id: Id,
    pub ty: Id,
}

/// An edge with endpoints given as node indices of the owning graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: Id,
    pub ty: Id,
    pub src: usize,
    pub tgt: usize,
}

/// A graph together with its typing into a type graph.
///
/// Nodes and edges are kept sorted by id, so positional indices follow the
/// canonical id order. Values are immutable once built; every structural
/// change produces a new graph.
#[derive(Clone, Default)]
pub struct TypedGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PartialEq for TypedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for TypedGraph {}

impl Hash for TypedGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nodes.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for TypedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", n.id, n.ty)?;
        }
        if !self.edges.is_empty() {
            write!(f, " |")?;
            for e in &self.edges {
                write!(
                    f,
                    " {}:{}({}->{})",
                    e.id, e.ty, self.nodes[e.src].id, self.nodes[e.tgt].id
                )?;
            }
        }
        write!(f, "}}")
    }
}

impl TypedGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Builds a graph from `(id, type)` nodes and `(id, type, src, tgt)`
    /// edges, endpoints referring to node ids.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = (Id, Id)>,
        edges: impl IntoIterator<Item = (Id, Id, Id, Id)>,
    ) -> Result<Self, GraphError> {
        let mut nodes: Vec<Node> = nodes.into_iter().map(|(id, ty)| Node { id, ty }).collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateNode(w[0].id.clone()));
        }
        let lookup = |id: &Id| nodes.binary_search_by(|n| n.id.cmp(id)).ok();
        let mut raw: Vec<Edge> = Vec::new();
        for (id, ty, s, t) in edges {
            let src = lookup(&s).ok_or_else(|| GraphError::DanglingEdge {
                edge: id.clone(),
                endpoint: s.clone(),
            })?;
            let tgt = lookup(&t).ok_or_else(|| GraphError::DanglingEdge {
                edge: id.clone(),
                endpoint: t.clone(),
            })?;
            raw.push(Edge { id, ty, src, tgt });
        }
        raw.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = raw.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(w[0].id.clone()));
        }
        Ok(Self::from_sorted(nodes, raw))
    }

    /// `nodes` and `edges` must already be sorted and duplicate-free.
    pub(crate) fn from_sorted(nodes: Vec<Node>, edges: Vec<Edge>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        let mut out = vec![Vec::new(); nodes.len()];
        let mut inc = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.src].push(i);
            inc[e.tgt].push(i);
        }
        TypedGraph { nodes, edges, out, inc }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of nodes plus number of edges.
    pub fn size(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn edge_source(&self, e: usize) -> &Node {
        &self.nodes[self.edges[e].src]
    }

    pub fn edge_target(&self, e: usize) -> &Node {
        &self.nodes[self.edges[e].tgt]
    }

    /// The inclusion of `self` into `other` when every item of `self` occurs
    /// in `other` under the same id, type and incidence.
    pub fn inclusion_into(&self, other: &TypedGraph) -> Option<Morphism> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let j = other.node_index(n.id.as_str())?;
            if other.nodes[j].ty != n.ty {
                return None;
            }
            nodes.push(j);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let j = other.edge_index(e.id.as_str())?;
            let oe = &other.edges[j];
            if oe.ty != e.ty || oe.src != nodes[e.src] || oe.tgt != nodes[e.tgt] {
                return None;
            }
            edges.push(j);
        }
        Some(Morphism { nodes, edges })
    }

    pub fn is_subgraph_of(&self, other: &TypedGraph) -> bool {
        self.inclusion_into(other).is_some()
    }

    /// Keeps the flagged items. Edges whose endpoints are dropped are dropped
    /// as well.
    pub fn restrict(&self, keep_nodes: &[bool], keep_edges: &[bool]) -> TypedGraph {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if keep_nodes[i] {
                remap[i] = nodes.len();
                nodes.push(n.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| keep_edges[*i] && keep_nodes[e.src] && keep_nodes[e.tgt])
            .map(|(_, e)| Edge {
                id: e.id.clone(),
                ty: e.ty.clone(),
                src: remap[e.src],
                tgt: remap[e.tgt],
            })
            .collect();
        TypedGraph::from_sorted(nodes, edges)
    }

    /// Union by ids. Items present in both graphs must agree on type and
    /// incidence.
    pub fn union(&self, other: &TypedGraph) -> Result<TypedGraph, GraphError> {
        let mut b = self.to_builder();
        for n in &other.nodes {
            match self.node_index(n.id.as_str()) {
                Some(i) if self.nodes[i].ty != n.ty => return Err(GraphError::Conflict(n.id.clone())),
                Some(_) => {}
                None => b.add_node(n.id.clone(), n.ty.clone()),
            }
        }
        for e in &other.edges {
            let (s, t) = (&other.nodes[e.src].id, &other.nodes[e.tgt].id);
            match self.edge_index(e.id.as_str()) {
                Some(i) => {
                    let se = &self.edges[i];
                    if se.ty != e.ty || &self.nodes[se.src].id != s || &self.nodes[se.tgt].id != t {
                        return Err(GraphError::Conflict(e.id.clone()));
                    }
                }
                None => b.add_edge(e.id.clone(), e.ty.clone(), s.clone(), t.clone()),
            }
        }
        b.build()
    }

    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::default();
        for n in &self.nodes {
            b.add_node(n.id.clone(), n.ty.clone());
        }
        for e in &self.edges {
            b.add_edge(
                e.id.clone(),
                e.ty.clone(),
                self.nodes[e.src].id.clone(),
                self.nodes[e.tgt].id.clone(),
            );
        }
        b
    }

    pub fn fresh_node_id(&self, base: &str) -> Id {
        fresh_id(base, |c| self.node_index(c).is_some())
    }

    pub fn fresh_edge_id(&self, base: &str) -> Id {
        fresh_id(base, |c| self.edge_index(c).is_some())
    }

    pub fn node_ids(&self) -> BTreeSet<Id> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    pub fn edge_ids(&self) -> BTreeSet<Id> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    /// Renames nodes to `n0, n1, ...` and edges to `e0, e1, ...` following the
    /// current canonical order.
    pub fn normalized(&self) -> TypedGraph {
        let width = |n: usize| n.saturating_sub(1).to_string().len();
        let (wn, we) = (width(self.nodes.len()), width(self.edges.len()));
        let names: Vec<Id> = (0..self.nodes.len()).map(|i| Id::from(format!("n{i:0wn$}"))).collect();
        let mut b = GraphBuilder::default();
        for (i, n) in self.nodes.iter().enumerate() {
            b.add_node(names[i].clone(), n.ty.clone());
        }
        for (i, e) in self.edges.iter().enumerate() {
            b.add_edge(
                format!("e{i:0we$}").into(),
                e.ty.clone(),
                names[e.src].clone(),
                names[e.tgt].clone(),
            );
        }
        b.build().expect("renaming keeps the graph well formed")
    }
}

/// Incremental construction of a [`TypedGraph`] from id-based items.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<(Id, Id)>,
    edges: Vec<(Id, Id, Id, Id)>,
}

impl GraphBuilder {
    pub fn node(mut self, id: impl Into<Id>, ty: impl Into<Id>) -> Self {
        self.add_node(id.into(), ty.into());
        self
    }

    pub fn edge(mut self, id: impl Into<Id>, ty: impl Into<Id>, src: impl Into<Id>, tgt: impl Into<Id>) -> Self {
        self.add_edge(id.into(), ty.into(), src.into(), tgt.into());
        self
    }

    pub fn add_node(&mut self, id: Id, ty: Id) {
        self.nodes.push((id, ty));
    }

    pub fn add_edge(&mut self, id: Id, ty: Id, src: Id, tgt: Id) {
        self.edges.push((id, ty, src, tgt));
    }

    pub fn build(self) -> Result<TypedGraph, GraphError> {
        TypedGraph::from_parts(self.nodes, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl_tok_tk() -> TypedGraph {
        TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap()
    }

    #[test]
    fn items_are_sorted_by_id() {
        let g = TypedGraph::builder()
            .node("z", "Pl")
            .node("a", "Tk")
            .edge("e", "tok", "z", "a")
            .build()
            .unwrap();
        assert_eq!(g.node(0).id, "a");
        assert_eq!(g.edge(0).src, 1);
        assert_eq!(g.out_edges(1), &[0]);
        assert_eq!(g.in_edges(0), &[0]);
    }

    #[test]
    fn duplicate_and_dangling_items_are_rejected() {
        let dup = TypedGraph::builder().node("a", "Pl").node("a", "Tk").build();
        assert!(matches!(dup, Err(GraphError::DuplicateNode(_))));
        let dangling = TypedGraph::builder().node("a", "Pl").edge("e", "tok", "a", "b").build();
        assert!(matches!(dangling, Err(GraphError::DanglingEdge { .. })));
    }

    #[test]
    fn inclusion_checks_types_and_incidence() {
        let g = pl_tok_tk();
        let sub = TypedGraph::builder().node("p", "Pl").build().unwrap();
        assert!(sub.is_subgraph_of(&g));
        let wrong = TypedGraph::builder().node("p", "Tk").build().unwrap();
        assert!(!wrong.is_subgraph_of(&g));
        let flipped = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "t", "p")
            .build()
            .unwrap();
        assert!(!flipped.is_subgraph_of(&g));
    }

    #[test]
    fn restrict_drops_incident_edges() {
        let g = pl_tok_tk();
        let r = g.restrict(&[true, false], &[true]);
        assert_eq!(r.node_count(), 1);
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn union_detects_conflicts() {
        let g = pl_tok_tk();
        let h = TypedGraph::builder().node("q", "Pl").build().unwrap();
        assert_eq!(g.union(&h).unwrap().node_count(), 3);
        let bad = TypedGraph::builder().node("p", "Tk").build().unwrap();
        assert!(g.union(&bad).is_err());
    }

    #[test]
    fn fresh_ids_avoid_collisions() {
        let g = pl_tok_tk();
        assert_eq!(g.fresh_node_id("p"), "p_1");
        assert_eq!(g.fresh_node_id("q"), "q");
        assert_eq!(g.fresh_edge_id("e"), "e_1");
    }
}

use std::collections::{BTreeMap, BTreeSet};

use crate::{graph::TypedGraph, id::Id};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeEdge {
    pub id: Id,
    pub src: Id,
    pub tgt: Id,
}

/// Node and edge types, the containment edge types `C` and the opposite
/// relation `O` (stored as ordered pairs, both directions present).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeGraph {
    pub nodes: Vec<Id>,
    pub edges: Vec<TypeEdge>,
    pub containment: BTreeSet<Id>,
    pub opposites: Vec<(Id, Id)>,
}

impl TypeGraph {
    pub fn edge_type(&self, id: &str) -> Option<&TypeEdge> {
        self.edges.iter().find(|e| e.id.as_str() == id)
    }

    pub fn has_node_type(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n.as_str() == id)
    }

    pub fn is_containment(&self, edge_type: &str) -> bool {
        self.containment.contains(edge_type)
    }

    pub fn opposite_of(&self, edge_type: &str) -> Option<&Id> {
        self.opposites
            .iter()
            .find(|(a, _)| a.as_str() == edge_type)
            .map(|(_, b)| b)
    }

    /// Adds `(a, b)` and `(b, a)` to `O` unless already present.
    pub fn add_opposite(&mut self, a: impl Into<Id>, b: impl Into<Id>) {
        let (a, b) = (a.into(), b.into());
        for pair in [(a.clone(), b.clone()), (b, a)] {
            if !self.opposites.contains(&pair) {
                self.opposites.push(pair);
            }
        }
    }

    pub fn node(mut self, id: impl Into<Id>) -> Self {
        self.nodes.push(id.into());
        self
    }

    pub fn edge(mut self, id: impl Into<Id>, src: impl Into<Id>, tgt: impl Into<Id>) -> Self {
        self.edges.push(TypeEdge {
            id: id.into(),
            src: src.into(),
            tgt: tgt.into(),
        });
        self
    }

    pub fn containment_edge(mut self, id: impl Into<Id>, src: impl Into<Id>, tgt: impl Into<Id>) -> Self {
        let id = id.into();
        self.containment.insert(id.clone());
        self.edge(id, src, tgt)
    }

    pub fn opposite(mut self, a: impl Into<Id>, b: impl Into<Id>) -> Self {
        self.add_opposite(a, b);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeViolation {
    #[error("duplicate type id `{0}`")]
    DuplicateId(Id),
    #[error("edge type `{edge}` has unknown endpoint `{endpoint}`")]
    DanglingEdge { edge: Id, endpoint: Id },
    #[error("containment entry `{0}` is not an edge type")]
    UnknownContainment(Id),
    #[error("opposite pair mentions unknown edge type `{0}`")]
    UnknownOpposite(Id),
    #[error("anti-reflexive: `{0}` is its own opposite")]
    AntiReflexive(Id),
    #[error("symmetric: ({0}, {1}) present without ({1}, {0})")]
    Symmetric(Id, Id),
    #[error("functional: `{0}` has opposites `{1}` and `{2}`")]
    Functional(Id, Id, Id),
    #[error("opposite-directed: `{0}` and `{1}` do not run in opposite directions")]
    OppositeDirection(Id, Id),
}

impl TypeViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            TypeViolation::DuplicateId(_) => "duplicate-id",
            TypeViolation::DanglingEdge { .. } => "dangling-edge",
            TypeViolation::UnknownContainment(_) => "unknown-containment",
            TypeViolation::UnknownOpposite(_) => "unknown-opposite",
            TypeViolation::AntiReflexive(_) => "anti-reflexive",
            TypeViolation::Symmetric(..) => "symmetric",
            TypeViolation::Functional(..) => "functional",
            TypeViolation::OppositeDirection(..) => "opposite-directed",
        }
    }
}

pub fn validate_type_graph(tg: &TypeGraph) -> Result<(), Vec<TypeViolation>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for n in &tg.nodes {
        if !seen.insert(n) {
            out.push(TypeViolation::DuplicateId(n.clone()));
        }
    }
    let mut seen_edges = BTreeSet::new();
    for e in &tg.edges {
        if !seen_edges.insert(&e.id) {
            out.push(TypeViolation::DuplicateId(e.id.clone()));
        }
        for end in [&e.src, &e.tgt] {
            if !seen.contains(end) {
                out.push(TypeViolation::DanglingEdge {
                    edge: e.id.clone(),
                    endpoint: end.clone(),
                });
            }
        }
    }
    for c in &tg.containment {
        if !seen_edges.contains(c) {
            out.push(TypeViolation::UnknownContainment(c.clone()));
        }
    }

    let pairs: BTreeSet<(&Id, &Id)> = tg.opposites.iter().map(|(a, b)| (a, b)).collect();
    let mut partner: BTreeMap<&Id, &Id> = BTreeMap::new();
    for &(a, b) in &pairs {
        for x in [a, b] {
            if !seen_edges.contains(x) {
                out.push(TypeViolation::UnknownOpposite(x.clone()));
            }
        }
        if a == b {
            out.push(TypeViolation::AntiReflexive(a.clone()));
            continue;
        }
        if !pairs.contains(&(b, a)) {
            out.push(TypeViolation::Symmetric(a.clone(), b.clone()));
        }
        match partner.get(a) {
            Some(&prev) if prev != b => out.push(TypeViolation::Functional(a.clone(), prev.clone(), b.clone())),
            _ => {
                partner.insert(a, b);
            }
        }
        if let (Some(ea), Some(eb)) = (tg.edge_type(a.as_str()), tg.edge_type(b.as_str())) {
            if ea.src != eb.tgt || eb.src != ea.tgt {
                // report each unordered pair once
                if a < b {
                    out.push(TypeViolation::OppositeDirection(a.clone(), b.clone()));
                }
            }
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypingViolation {
    #[error("node `{node}` has unknown type `{ty}`")]
    UnknownNodeType { node: Id, ty: Id },
    #[error("edge `{edge}` has unknown type `{ty}`")]
    UnknownEdgeType { edge: Id, ty: Id },
    #[error("src mismatch: edge `{edge}` expects source type `{expected}`, found `{found}`")]
    SrcMismatch { edge: Id, expected: Id, found: Id },
    #[error("tgt mismatch: edge `{edge}` expects target type `{expected}`, found `{found}`")]
    TgtMismatch { edge: Id, expected: Id, found: Id },
}

pub fn validate_typed_graph(g: &TypedGraph, tg: &TypeGraph) -> Result<(), Vec<TypingViolation>> {
    let mut out = Vec::new();
    for n in g.nodes() {
        if !tg.has_node_type(n.ty.as_str()) {
            out.push(TypingViolation::UnknownNodeType {
                node: n.id.clone(),
                ty: n.ty.clone(),
            });
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        let Some(te) = tg.edge_type(e.ty.as_str()) else {
            out.push(TypingViolation::UnknownEdgeType {
                edge: e.id.clone(),
                ty: e.ty.clone(),
            });
            continue;
        };
        let (s, t) = (g.edge_source(i), g.edge_target(i));
        if s.ty != te.src {
            out.push(TypingViolation::SrcMismatch {
                edge: e.id.clone(),
                expected: te.src.clone(),
                found: s.ty.clone(),
            });
        }
        if t.ty != te.tgt {
            out.push(TypingViolation::TgtMismatch {
                edge: e.id.clone(),
                expected: te.tgt.clone(),
                found: t.ty.clone(),
            });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Transitive closure of the direct containment relation, as node ids.
pub fn containment_pairs(g: &TypedGraph, tg: &TypeGraph) -> BTreeSet<(Id, Id)> {
    let n = g.node_count();
    let mut succ = vec![Vec::new(); n];
    for e in g.edges() {
        if tg.is_containment(e.ty.as_str()) {
            succ[e.src].push(e.tgt);
        }
    }
    let mut out = BTreeSet::new();
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = succ[start].clone();
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            stack.extend(succ[v].iter().copied());
        }
        for (v, hit) in seen.into_iter().enumerate() {
            if hit {
                out.insert((g.node(start).id.clone(), g.node(v).id.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petri;

    #[test]
    fn petri_type_graph_is_valid() {
        assert_eq!(validate_type_graph(&petri::type_graph()), Ok(()));
    }

    #[test]
    fn reflexive_opposite_is_reported() {
        let tg = TypeGraph::default().node("A").edge("e", "A", "A").opposite("e", "e");
        let v = validate_type_graph(&tg).unwrap_err();
        assert!(v.iter().any(|v| v.kind() == "anti-reflexive"));
    }

    #[test]
    fn non_functional_opposite_is_reported() {
        let mut tg = TypeGraph::default()
            .node("A")
            .node("B")
            .edge("e1", "A", "B")
            .edge("e2", "B", "A")
            .edge("e3", "B", "A");
        tg.opposites = vec![("e1".into(), "e2".into()), ("e1".into(), "e3".into())];
        let v = validate_type_graph(&tg).unwrap_err();
        assert!(v.iter().any(|v| v.kind() == "functional"));
        assert!(v.iter().any(|v| v.kind() == "symmetric"));
    }

    #[test]
    fn misdirected_opposite_is_reported() {
        let tg = TypeGraph::default()
            .node("A")
            .node("B")
            .edge("e1", "A", "B")
            .edge("e2", "A", "B")
            .opposite("e1", "e2");
        let v = validate_type_graph(&tg).unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind(), "opposite-directed");
    }

    #[test]
    fn typing_checks_endpoints() {
        let tg = petri::type_graph();
        assert_eq!(validate_typed_graph(&TypedGraph::empty(), &tg), Ok(()));
        let ok = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap();
        assert_eq!(validate_typed_graph(&ok, &tg), Ok(()));
        let bad = TypedGraph::builder()
            .node("p", "Tr")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap();
        let v = validate_typed_graph(&bad, &tg).unwrap_err();
        assert!(matches!(v[..], [TypingViolation::SrcMismatch { .. }]));
        let unknown = TypedGraph::builder().node("x", "Nope").build().unwrap();
        assert!(validate_typed_graph(&unknown, &tg).is_err());
    }

    fn chain(edges: &[(&str, &str)]) -> TypedGraph {
        let mut b = TypedGraph::builder();
        let mut names = BTreeSet::new();
        for (s, t) in edges {
            names.insert(*s);
            names.insert(*t);
        }
        for n in names {
            b = b.node(n, "N");
        }
        for (i, (s, t)) in edges.iter().enumerate() {
            b = b.edge(format!("e{i}"), "c", *s, *t);
        }
        b.build().unwrap()
    }

    fn containment_tg() -> TypeGraph {
        TypeGraph::default()
            .node("N")
            .containment_edge("c", "N", "N")
            .edge("r", "N", "N")
    }

    #[test]
    fn containment_closure() {
        let tg = containment_tg();
        let g = chain(&[("v1", "v2"), ("v2", "v3")]);
        let pairs: Vec<(String, String)> = containment_pairs(&g, &tg)
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let expect = [("v1", "v2"), ("v1", "v3"), ("v2", "v3")];
        assert_eq!(
            pairs,
            expect
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect::<Vec<_>>()
        );

        let cyc = chain(&[("v1", "v2"), ("v2", "v1")]);
        let pairs = containment_pairs(&cyc, &tg);
        assert!(pairs.contains(&("v1".into(), "v1".into())));
        assert!(pairs.contains(&("v2".into(), "v2".into())));

        let plain = TypedGraph::builder()
            .node("a", "N")
            .node("b", "N")
            .edge("e", "r", "a", "b")
            .build()
            .unwrap();
        assert!(containment_pairs(&plain, &tg).is_empty());
    }
}

use crate::{
    condition::{equivalent, Condition},
    graph::{Morphism, TypedGraph},
    id::Id,
};

/// `Shift(b, c)` for `b: P -> R` and `c` anchored at `P`; the result is
/// anchored at `r`.
///
/// Every jointly surjective pair `(a', b')` is built by deciding, for each
/// item of `C` outside the anchor, whether it is a fresh copy or is glued to
/// a compatible item of `R` outside `b(P)`. Disjuncts come with the largest
/// overlap first; disjuncts that only differ by renaming are dropped.
pub fn shift(b: &Morphism, c: &Condition, r: &TypedGraph) -> Condition {
    match c {
        Condition::True => Condition::True,
        Condition::Not(inner) => Condition::Not(Box::new(shift(b, inner, r))),
        Condition::And(cs) => Condition::And(cs.iter().map(|c| shift(b, c, r)).collect()),
        Condition::Or(cs) => Condition::Or(cs.iter().map(|c| shift(b, c, r)).collect()),
        Condition::Exists(e) => {
            let mut gluings = Vec::new();
            Gluing::new(b, e.graph(), e.from_anchor(), r).enumerate(&mut gluings);
            gluings.sort_by_key(|(fresh, _, _)| *fresh);
            let mut out: Vec<Condition> = Vec::new();
            for (fresh, r2, b2) in gluings {
                let sub = shift(&b2, e.sub(), &r2);
                let disjunct = if fresh == 0 {
                    sub
                } else {
                    let a2 = r.inclusion_into(&r2).expect("R is kept inside R'");
                    Condition::exists_unchecked(r2, a2, sub)
                };
                if !out.iter().any(|d| equivalent(d, &disjunct)) {
                    out.push(disjunct);
                }
            }
            Condition::Or(out)
        }
    }
}

/// Moves a condition along an isomorphism `iso: A -> to` of its anchor.
pub fn transport(c: &Condition, iso: &Morphism, to: &TypedGraph) -> Condition {
    shift(iso, c, to)
}

struct Gluing<'a> {
    c: &'a TypedGraph,
    r: &'a TypedGraph,
    node_img: Vec<Option<usize>>,
    edge_img: Vec<Option<usize>>,
    free_nodes: Vec<usize>,
    free_edges: Vec<usize>,
    r_node_used: Vec<bool>,
    r_edge_used: Vec<bool>,
}

impl<'a> Gluing<'a> {
    fn new(b: &Morphism, c: &'a TypedGraph, from_anchor: &Morphism, r: &'a TypedGraph) -> Self {
        let mut node_img = vec![None; c.node_count()];
        let mut edge_img = vec![None; c.edge_count()];
        let mut r_node_used = vec![false; r.node_count()];
        let mut r_edge_used = vec![false; r.edge_count()];
        for (i, &v) in from_anchor.nodes.iter().enumerate() {
            node_img[v] = Some(b.nodes[i]);
            r_node_used[b.nodes[i]] = true;
        }
        for (i, &e) in from_anchor.edges.iter().enumerate() {
            edge_img[e] = Some(b.edges[i]);
            r_edge_used[b.edges[i]] = true;
        }
        let free_nodes = (0..c.node_count()).filter(|&v| node_img[v].is_none()).collect();
        let free_edges = (0..c.edge_count()).filter(|&e| edge_img[e].is_none()).collect();
        Gluing {
            c,
            r,
            node_img,
            edge_img,
            free_nodes,
            free_edges,
            r_node_used,
            r_edge_used,
        }
    }

    fn enumerate(&mut self, out: &mut Vec<(usize, TypedGraph, Morphism)>) {
        self.nodes(0, 0, out);
    }

    fn nodes(&mut self, k: usize, fresh: usize, out: &mut Vec<(usize, TypedGraph, Morphism)>) {
        let Some(&v) = self.free_nodes.get(k) else {
            return self.edges(0, fresh, out);
        };
        self.nodes(k + 1, fresh + 1, out);
        for w in 0..self.r.node_count() {
            if self.r_node_used[w] || self.r.node(w).ty != self.c.node(v).ty {
                continue;
            }
            self.r_node_used[w] = true;
            self.node_img[v] = Some(w);
            self.nodes(k + 1, fresh, out);
            self.node_img[v] = None;
            self.r_node_used[w] = false;
        }
    }

    fn edges(&mut self, k: usize, fresh: usize, out: &mut Vec<(usize, TypedGraph, Morphism)>) {
        let Some(&e) = self.free_edges.get(k) else {
            out.push(self.build(fresh));
            return;
        };
        self.edges(k + 1, fresh + 1, out);
        let ce = self.c.edge(e);
        let (Some(s), Some(t)) = (self.node_img[ce.src], self.node_img[ce.tgt]) else {
            return;
        };
        for &h in self.r.out_edges(s) {
            let re = self.r.edge(h);
            if self.r_edge_used[h] || re.tgt != t || re.ty != ce.ty {
                continue;
            }
            self.r_edge_used[h] = true;
            self.edge_img[e] = Some(h);
            self.edges(k + 1, fresh, out);
            self.edge_img[e] = None;
            self.r_edge_used[h] = false;
        }
    }

    fn build(&self, fresh: usize) -> (usize, TypedGraph, Morphism) {
        let (c, r) = (self.c, self.r);
        let mut b = r.to_builder();
        let mut node_ids: Vec<Id> = Vec::with_capacity(c.node_count());
        let mut taken_nodes: std::collections::BTreeSet<Id> = r.node_ids();
        for v in 0..c.node_count() {
            let id = match self.node_img[v] {
                Some(w) => r.node(w).id.clone(),
                None => {
                    let id = crate::id::fresh_id(c.node(v).id.as_str(), |s| taken_nodes.contains(s));
                    taken_nodes.insert(id.clone());
                    b.add_node(id.clone(), c.node(v).ty.clone());
                    id
                }
            };
            node_ids.push(id);
        }
        let mut edge_ids: Vec<Id> = Vec::with_capacity(c.edge_count());
        let mut taken_edges = r.edge_ids();
        for e in 0..c.edge_count() {
            let id = match self.edge_img[e] {
                Some(h) => r.edge(h).id.clone(),
                None => {
                    let ce = c.edge(e);
                    let id = crate::id::fresh_id(ce.id.as_str(), |s| taken_edges.contains(s));
                    taken_edges.insert(id.clone());
                    b.add_edge(
                        id.clone(),
                        ce.ty.clone(),
                        node_ids[ce.src].clone(),
                        node_ids[ce.tgt].clone(),
                    );
                    id
                }
            };
            edge_ids.push(id);
        }
        let r2 = b.build().expect("gluing keeps the graph well formed");
        let b2 = Morphism {
            nodes: node_ids
                .iter()
                .map(|id| r2.node_index(id.as_str()).expect("present"))
                .collect(),
            edges: edge_ids
                .iter()
                .map(|id| r2.edge_index(id.as_str()).expect("present"))
                .collect(),
        };
        (fresh, r2, b2)
    }
}

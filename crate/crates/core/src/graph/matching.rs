//! Injective, type-preserving morphism search.
//!
//! Plain backtracking: pattern nodes are assigned one by one, preferring nodes
//! already connected to the assigned part and then the scarcest type.
//! Candidate host nodes are drawn from the neighbourhood of an assigned node
//! whenever possible. Edges are assigned once all nodes are placed.

use std::ops::ControlFlow;

use crate::graph::{Morphism, PartialMorphism, TypedGraph};

const FREE: usize = usize::MAX;

struct Search<'a, F> {
    pat: &'a TypedGraph,
    host: &'a TypedGraph,
    node_order: Vec<usize>,
    edge_order: Vec<usize>,
    node_map: Vec<usize>,
    edge_map: Vec<usize>,
    node_used: Vec<bool>,
    edge_used: Vec<bool>,
    emit: F,
}

/// Calls `f` for every injective morphism `pattern -> host` extending the
/// partial assignment `fixed`. Stops as soon as `f` breaks.
///
/// The visiting order is deterministic but not the canonical one; use
/// [`enumerate_morphisms`] when order matters.
pub fn for_each_match<F>(pattern: &TypedGraph, host: &TypedGraph, fixed: &PartialMorphism, f: F) -> ControlFlow<()>
where
    F: FnMut(&Morphism) -> ControlFlow<()>,
{
    if pattern.node_count() > host.node_count() || pattern.edge_count() > host.edge_count() {
        return ControlFlow::Continue(());
    }
    let mut s = Search {
        pat: pattern,
        host,
        node_order: Vec::new(),
        edge_order: Vec::new(),
        node_map: vec![FREE; pattern.node_count()],
        edge_map: vec![FREE; pattern.edge_count()],
        node_used: vec![false; host.node_count()],
        edge_used: vec![false; host.edge_count()],
        emit: f,
    };
    if !s.seed(fixed) {
        return ControlFlow::Continue(());
    }
    s.plan();
    s.assign_node(0)
}

pub fn has_match(pattern: &TypedGraph, host: &TypedGraph, fixed: &PartialMorphism) -> bool {
    for_each_match(pattern, host, fixed, |_| ControlFlow::Break(())).is_break()
}

/// All injective morphisms `a -> g`, in canonical order (lexicographic on
/// the node images, then the edge images).
pub fn enumerate_morphisms(a: &TypedGraph, g: &TypedGraph) -> Vec<Morphism> {
    collect_sorted(a, g, &PartialMorphism::undefined(a.node_count(), a.edge_count()))
}

/// All `q: c -> g` with `q ∘ a = p`, where `a` is the inclusion of `a_graph`
/// into `c` by ids. Empty if `a_graph` is not a subgraph of `c`.
pub fn enumerate_extensions(a_graph: &TypedGraph, c: &TypedGraph, p: &Morphism, g: &TypedGraph) -> Vec<Morphism> {
    let Some(inc) = a_graph.inclusion_into(c) else {
        return Vec::new();
    };
    let fixed = inc.inverse(c.node_count(), c.edge_count()).then_total(p);
    collect_sorted(c, g, &fixed)
}

fn collect_sorted(pat: &TypedGraph, host: &TypedGraph, fixed: &PartialMorphism) -> Vec<Morphism> {
    let mut out = Vec::new();
    let _ = for_each_match(pat, host, fixed, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

impl<F> Search<'_, F>
where
    F: FnMut(&Morphism) -> ControlFlow<()>,
{
    fn seed(&mut self, fixed: &PartialMorphism) -> bool {
        for (v, img) in fixed.nodes.iter().enumerate() {
            if let Some(w) = *img {
                if w >= self.host.node_count() || self.node_used[w] || self.host.node(w).ty != self.pat.node(v).ty {
                    return false;
                }
                self.node_map[v] = w;
                self.node_used[w] = true;
            }
        }
        for (e, img) in fixed.edges.iter().enumerate() {
            if let Some(h) = *img {
                let pe = self.pat.edge(e);
                if h >= self.host.edge_count() || self.edge_used[h] {
                    return false;
                }
                let he = self.host.edge(h);
                if he.ty != pe.ty || self.node_map[pe.src] != he.src || self.node_map[pe.tgt] != he.tgt {
                    return false;
                }
                self.edge_map[e] = h;
                self.edge_used[h] = true;
            }
        }
        true
    }

    fn plan(&mut self) {
        let pat = self.pat;
        let type_count = |v: usize| {
            let ty = &pat.node(v).ty;
            self.host.nodes().iter().filter(|n| &n.ty == ty).count()
        };
        let mut placed: Vec<bool> = self.node_map.iter().map(|&w| w != FREE).collect();
        let mut remaining: Vec<usize> = (0..pat.node_count()).filter(|&v| !placed[v]).collect();
        while !remaining.is_empty() {
            let links = |v: usize| {
                pat.out_edges(v)
                    .iter()
                    .map(|&e| pat.edge(e).tgt)
                    .chain(pat.in_edges(v).iter().map(|&e| pat.edge(e).src))
                    .filter(|&u| placed[u])
                    .count()
            };
            let (pos, &best) = remaining
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| (std::cmp::Reverse(links(v)), type_count(v), v))
                .expect("non-empty");
            remaining.remove(pos);
            placed[best] = true;
            self.node_order.push(best);
        }
        self.edge_order = (0..pat.edge_count()).filter(|&e| self.edge_map[e] == FREE).collect();
    }

    fn assign_node(&mut self, depth: usize) -> ControlFlow<()> {
        let Some(&v) = self.node_order.get(depth) else {
            return self.assign_edge(0);
        };
        for w in self.candidates(v) {
            if !self.feasible(v, w) {
                continue;
            }
            self.node_map[v] = w;
            self.node_used[w] = true;
            let flow = self.assign_node(depth + 1);
            self.node_used[w] = false;
            self.node_map[v] = FREE;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        let (pat, host) = (self.pat, self.host);
        for &e in pat.out_edges(v) {
            let pe = pat.edge(e);
            let u = self.node_map[pe.tgt];
            if u != FREE && pe.tgt != v {
                let mut c: Vec<usize> = host
                    .in_edges(u)
                    .iter()
                    .map(|&h| host.edge(h))
                    .filter(|he| he.ty == pe.ty)
                    .map(|he| he.src)
                    .collect();
                c.sort_unstable();
                c.dedup();
                return c;
            }
        }
        for &e in pat.in_edges(v) {
            let pe = pat.edge(e);
            let u = self.node_map[pe.src];
            if u != FREE && pe.src != v {
                let mut c: Vec<usize> = host
                    .out_edges(u)
                    .iter()
                    .map(|&h| host.edge(h))
                    .filter(|he| he.ty == pe.ty)
                    .map(|he| he.tgt)
                    .collect();
                c.sort_unstable();
                c.dedup();
                return c;
            }
        }
        let ty = &pat.node(v).ty;
        (0..host.node_count()).filter(|&w| &host.node(w).ty == ty).collect()
    }

    fn feasible(&self, v: usize, w: usize) -> bool {
        let (pat, host) = (self.pat, self.host);
        if self.node_used[w]
            || host.node(w).ty != pat.node(v).ty
            || host.out_edges(w).len() < pat.out_edges(v).len()
            || host.in_edges(w).len() < pat.in_edges(v).len()
        {
            return false;
        }
        // Edges between v and the assigned part need enough parallel
        // counterparts in the host.
        let image = |u: usize| if u == v { w } else { self.node_map[u] };
        let mut needed: Vec<(usize, usize, &str)> = Vec::new();
        for &e in pat.out_edges(v).iter().chain(pat.in_edges(v)) {
            let pe = pat.edge(e);
            let (s, t) = (image(pe.src), image(pe.tgt));
            if s != FREE && t != FREE {
                needed.push((s, t, pe.ty.as_str()));
            }
        }
        needed.sort_unstable();
        let mut i = 0;
        while i < needed.len() {
            let key = needed[i];
            let mut j = i;
            while j < needed.len() && needed[j] == key {
                j += 1;
            }
            // loops appear twice, once per incidence list
            let want = if key.0 == w && key.1 == w { (j - i) / 2 } else { j - i };
            let have = host
                .out_edges(key.0)
                .iter()
                .filter(|&&h| {
                    let he = host.edge(h);
                    he.tgt == key.1 && he.ty.as_str() == key.2
                })
                .count();
            if have < want {
                return false;
            }
            i = j;
        }
        true
    }

    fn assign_edge(&mut self, depth: usize) -> ControlFlow<()> {
        let Some(&e) = self.edge_order.get(depth) else {
            let m = Morphism {
                nodes: self.node_map.clone(),
                edges: self.edge_map.clone(),
            };
            return (self.emit)(&m);
        };
        let pe = self.pat.edge(e);
        let (s, t) = (self.node_map[pe.src], self.node_map[pe.tgt]);
        for &h in self.host.out_edges(s) {
            let he = self.host.edge(h);
            if self.edge_used[h] || he.tgt != t || he.ty != pe.ty {
                continue;
            }
            self.edge_map[e] = h;
            self.edge_used[h] = true;
            let flow = self.assign_edge(depth + 1);
            self.edge_used[h] = false;
            self.edge_map[e] = FREE;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl_tok(n_tokens: usize) -> TypedGraph {
        let mut b = TypedGraph::builder().node("p", "Pl");
        for i in 0..n_tokens {
            b = b
                .node(format!("t{i}"), "Tk")
                .edge(format!("e{i}"), "tok", "p", format!("t{i}"));
        }
        b.build().unwrap()
    }

    #[test]
    fn two_places_two_morphisms() {
        let a = TypedGraph::builder().node("x", "Pl").build().unwrap();
        let g = TypedGraph::builder().node("p", "Pl").node("q", "Pl").build().unwrap();
        let ms = enumerate_morphisms(&a, &g);
        assert_eq!(ms.len(), 2);
        assert!(ms[0] < ms[1]);
        assert!(ms.iter().all(|m| m.is_valid(&a, &g)));
    }

    #[test]
    fn identity_is_unique() {
        let g = pl_tok(1);
        assert_eq!(enumerate_morphisms(&g, &g), vec![Morphism::identity(&g)]);
    }

    #[test]
    fn extension_counts() {
        let a = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let c = pl_tok(1);
        let lone = a.clone();
        let p = Morphism {
            nodes: vec![0],
            edges: vec![],
        };
        assert!(enumerate_extensions(&a, &c, &p, &lone).is_empty());
        let g = pl_tok(2);
        let exts = enumerate_extensions(&a, &c, &p, &g);
        assert_eq!(exts.len(), 2);
        assert!(exts.iter().all(|q| q.nodes[0] == 0));
        let id = Morphism::identity(&a);
        assert_eq!(enumerate_extensions(&a, &a, &id, &a), vec![id]);
    }

    #[test]
    fn parallel_edges_multiply_matches() {
        let par = |n: usize| {
            let mut b = TypedGraph::builder().node("p", "Pl").node("t", "Tk");
            for i in 0..n {
                b = b.edge(format!("e{i}"), "tok", "p", "t");
            }
            b.build().unwrap()
        };
        // ordered pairs of distinct edges
        assert_eq!(enumerate_morphisms(&par(2), &par(3)).len(), 6);
        assert!(enumerate_morphisms(&par(2), &par(1)).is_empty());
    }

    #[test]
    fn loops_need_host_loops() {
        let looped = TypedGraph::builder()
            .node("v", "N")
            .edge("l", "r", "v", "v")
            .build()
            .unwrap();
        let edge = TypedGraph::builder()
            .node("v", "N")
            .node("w", "N")
            .edge("l", "r", "v", "w")
            .build()
            .unwrap();
        assert!(enumerate_morphisms(&looped, &edge).is_empty());
        assert_eq!(enumerate_morphisms(&looped, &looped).len(), 1);
    }

    #[test]
    fn two_containers_do_not_fit_single_containment() {
        let two = TypedGraph::builder()
            .node("p1", "Pl")
            .node("p2", "Pl")
            .node("t", "Tk")
            .edge("e1", "tok", "p1", "t")
            .edge("e2", "tok", "p2", "t")
            .build()
            .unwrap();
        assert!(enumerate_morphisms(&two, &pl_tok(1)).is_empty());
    }

    #[test]
    fn inconsistent_seed_yields_nothing() {
        let g = pl_tok(1);
        let mut fixed = PartialMorphism::undefined(2, 1);
        fixed.nodes[0] = Some(1);
        assert!(!has_match(&g, &g, &fixed));
    }
}

//! Brute-force reference implementations used as test oracles.
//!
//! Nothing here calls the matcher, the satisfaction checker or the EMF
//! checks of the library: morphisms are found by trying every assignment.

#![allow(dead_code)]

use std::collections::BTreeMap;

use graph_mend_core::{condition::Condition, petri, Morphism, TypeGraph, TypedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every injective, type- and incidence-preserving map `pat -> host` that
/// agrees with `fixed` where it is `Some`.
pub fn brute_morphisms(
    pat: &TypedGraph,
    host: &TypedGraph,
    fixed_nodes: &[Option<usize>],
    fixed_edges: &[Option<usize>],
) -> Vec<Morphism> {
    let mut out = Vec::new();
    let mut nodes = vec![usize::MAX; pat.node_count()];
    node_step(pat, host, fixed_nodes, fixed_edges, 0, &mut nodes, &mut out);
    out
}

fn node_step(
    pat: &TypedGraph,
    host: &TypedGraph,
    fixed_nodes: &[Option<usize>],
    fixed_edges: &[Option<usize>],
    i: usize,
    nodes: &mut Vec<usize>,
    out: &mut Vec<Morphism>,
) {
    if i == pat.node_count() {
        let mut edges = vec![usize::MAX; pat.edge_count()];
        edge_step(pat, host, fixed_edges, nodes, 0, &mut edges, out);
        return;
    }
    for v in 0..host.node_count() {
        if fixed_nodes.get(i).copied().flatten().is_some_and(|f| f != v) {
            continue;
        }
        if nodes[..i].contains(&v) || host.node(v).ty != pat.node(i).ty {
            continue;
        }
        nodes[i] = v;
        node_step(pat, host, fixed_nodes, fixed_edges, i + 1, nodes, out);
    }
}

fn edge_step(
    pat: &TypedGraph,
    host: &TypedGraph,
    fixed_edges: &[Option<usize>],
    nodes: &[usize],
    j: usize,
    edges: &mut Vec<usize>,
    out: &mut Vec<Morphism>,
) {
    if j == pat.edge_count() {
        out.push(Morphism {
            nodes: nodes.to_vec(),
            edges: edges.clone(),
        });
        return;
    }
    let pe = pat.edge(j);
    for x in 0..host.edge_count() {
        if fixed_edges.get(j).copied().flatten().is_some_and(|f| f != x) {
            continue;
        }
        let he = host.edge(x);
        if edges[..j].contains(&x) || he.ty != pe.ty || he.src != nodes[pe.src] || he.tgt != nodes[pe.tgt] {
            continue;
        }
        edges[j] = x;
        edge_step(pat, host, fixed_edges, nodes, j + 1, edges, out);
    }
}

/// `p ⊨ c` for `p: A -> G`, by the textbook definition.
pub fn sat(p: &Morphism, c: &Condition, g: &TypedGraph) -> bool {
    match c {
        Condition::True => true,
        Condition::Not(x) => !sat(p, x, g),
        Condition::And(cs) => cs.iter().all(|c| sat(p, c, g)),
        Condition::Or(cs) => cs.iter().any(|c| sat(p, c, g)),
        Condition::Exists(e) => {
            let cg = e.graph();
            let a = e.from_anchor();
            let mut fn_ = vec![None; cg.node_count()];
            let mut fe = vec![None; cg.edge_count()];
            for (i, &v) in a.nodes.iter().enumerate() {
                fn_[v] = Some(p.nodes[i]);
            }
            for (i, &x) in a.edges.iter().enumerate() {
                fe[x] = Some(p.edges[i]);
            }
            brute_morphisms(cg, g, &fn_, &fe).iter().any(|q| sat(q, e.sub(), g))
        }
    }
}

pub fn sat_constraint(g: &TypedGraph, c: &Condition) -> bool {
    sat(&Morphism::default(), c, g)
}

/// Isomorphism by trying every bijection of nodes and comparing edge
/// multisets.
pub fn isomorphic(g: &TypedGraph, h: &TypedGraph) -> bool {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let none_n = vec![None; g.node_count()];
    let bijections = brute_morphisms(&strip_edges(g), &strip_edges(h), &none_n, &[]);
    let multiset = |gr: &TypedGraph, map: &dyn Fn(usize) -> usize| {
        let mut m: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
        for e in gr.edges() {
            *m.entry((map(e.src), map(e.tgt), e.ty.to_string())).or_default() += 1;
        }
        m
    };
    let target = multiset(h, &|v| v);
    bijections.iter().any(|b| multiset(g, &|v| b.nodes[v]) == target)
}

fn strip_edges(g: &TypedGraph) -> TypedGraph {
    let mut b = TypedGraph::builder();
    for n in g.nodes() {
        b.add_node(n.id.clone(), n.ty.clone());
    }
    b.build().unwrap()
}

/// The four EMF conditions, checked with a reachability matrix.
pub fn emf_ok(g: &TypedGraph, tg: &TypeGraph) -> bool {
    let n = g.node_count();
    let cont: Vec<_> = g.edges().iter().filter(|e| tg.containment.contains(&e.ty)).collect();
    for (i, a) in cont.iter().enumerate() {
        if cont[i + 1..].iter().any(|b| b.tgt == a.tgt) {
            return false;
        }
    }
    let mut reach = vec![vec![false; n]; n];
    for e in &cont {
        reach[e.src][e.tgt] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    if (0..n).any(|v| reach[v][v]) {
        return false;
    }
    let es = g.edges();
    for (i, a) in es.iter().enumerate() {
        if es[i + 1..]
            .iter()
            .any(|b| a.src == b.src && a.tgt == b.tgt && a.ty == b.ty)
        {
            return false;
        }
    }
    for (t1, t2) in &tg.opposites {
        for e in es.iter().filter(|e| &e.ty == t1) {
            if !es.iter().any(|o| &o.ty == t2 && o.src == e.tgt && o.tgt == e.src) {
                return false;
            }
        }
    }
    true
}

/// A random graph over `tg`; endpoints are drawn among nodes of fitting
/// type, so parallel edges and loops occur.
pub fn random_graph(rng: &mut ChaCha8Rng, tg: &TypeGraph, max_nodes: usize, max_edges: usize) -> TypedGraph {
    let n = rng.random_range(0..=max_nodes);
    let mut b = TypedGraph::builder();
    let types: Vec<_> = (0..n)
        .map(|_| tg.nodes[rng.random_range(0..tg.nodes.len())].clone())
        .collect();
    for (i, t) in types.iter().enumerate() {
        b.add_node(format!("v{i}").into(), t.clone());
    }
    let m = rng.random_range(0..=max_edges);
    let mut k = 0;
    for _ in 0..m * 4 {
        if k == m {
            break;
        }
        let te = &tg.edges[rng.random_range(0..tg.edges.len())];
        let srcs: Vec<usize> = (0..n).filter(|&i| types[i] == te.src).collect();
        let tgts: Vec<usize> = (0..n).filter(|&i| types[i] == te.tgt).collect();
        if srcs.is_empty() || tgts.is_empty() {
            continue;
        }
        let s = srcs[rng.random_range(0..srcs.len())];
        let t = tgts[rng.random_range(0..tgts.len())];
        b.add_edge(
            format!("x{k}").into(),
            te.id.clone(),
            format!("v{s}").into(),
            format!("v{t}").into(),
        );
        k += 1;
    }
    b.build().unwrap()
}

/// A reproducible batch of random graphs over the Petri type graph.
pub fn petri_corpus(seed: u64, count: usize, max_nodes: usize, max_edges: usize) -> Vec<TypedGraph> {
    let tg = petri::type_graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_graph(&mut rng, &tg, max_nodes, max_edges))
        .collect()
}

pub fn node(id: &str, ty: &str) -> TypedGraph {
    TypedGraph::builder().node(id, ty).build().unwrap()
}

pub fn empty() -> TypedGraph {
    TypedGraph::empty()
}

pub fn pl() -> TypedGraph {
    node("p", "Pl")
}

pub fn pl_tok_tk() -> TypedGraph {
    TypedGraph::builder()
        .node("p", "Pl")
        .node("t", "Tk")
        .edge("e", "tok", "p", "t")
        .build()
        .unwrap()
}

pub fn parallel_tok() -> TypedGraph {
    TypedGraph::builder()
        .node("p", "Pl")
        .node("t", "Tk")
        .edge("e1", "tok", "p", "t")
        .edge("e2", "tok", "p", "t")
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
    Condition::forall(&empty(), pl(), Condition::exists_plain(&pl(), pl_tok_tk()).unwrap()).unwrap()
}

/// Legit constraints over the Petri type graph, with a short name each.
pub fn legit_fixtures() -> Vec<(&'static str, Condition)> {
    let e = empty();
    let arc = TypedGraph::builder()
        .node("a", "PTArc")
        .node("p", "Pl")
        .edge("s", "pt_src", "a", "p")
        .build()
        .unwrap();
    let arc_back = arc.to_builder().edge("o", "pl_out", "p", "a").build().unwrap();
    let pn = node("n", "PN");
    let pn_pl = pn
        .to_builder()
        .node("p", "Pl")
        .edge("c", "places", "n", "p")
        .build()
        .unwrap();
    let tk = node("t", "Tk");
    vec![
        ("no-parallel-tok", Condition::not_exists(&e, parallel_tok()).unwrap()),
        ("one-container", Condition::not_exists(&e, two_containers()).unwrap()),
        ("every-place-has-token", every_place_has_token()),
        ("some-place", Condition::exists_plain(&e, pl()).unwrap()),
        (
            "some-empty-place",
            Condition::exists(&e, pl(), Condition::not_exists(&pl(), pl_tok_tk()).unwrap()).unwrap(),
        ),
        (
            "no-place-has-token",
            Condition::forall(&e, pl(), Condition::not_exists(&pl(), pl_tok_tk()).unwrap()).unwrap(),
        ),
        (
            "conjunctive",
            Condition::and([
                Condition::not_exists(&e, two_containers()).unwrap(),
                every_place_has_token(),
            ]),
        ),
        (
            "no-token-or-some-place",
            Condition::or([
                Condition::not_exists(&e, tk).unwrap(),
                Condition::exists_plain(&e, pl()).unwrap(),
            ]),
        ),
        (
            "arc-opposite",
            Condition::forall(&e, arc.clone(), Condition::exists_plain(&arc, arc_back).unwrap()).unwrap(),
        ),
        (
            "every-net-has-place",
            Condition::forall(&e, pn.clone(), Condition::exists_plain(&pn, pn_pl).unwrap()).unwrap(),
        ),
    ]
}

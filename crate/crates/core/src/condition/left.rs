use std::collections::BTreeSet;

use crate::{
    condition::{shift, simplify, transport, Condition},
    graph::{Morphism, TypedGraph},
    id::{fresh_id, Id},
};

/// `Left(p, ac)` for the plain rule `p = ⟨l ⊇ k ⊆ r⟩` (inclusions by ids)
/// and `ac` anchored at `r`. The result is anchored at `l`.
pub fn left(l: &TypedGraph, k: &TypedGraph, r: &TypedGraph, ac: &Condition) -> Condition {
    match ac {
        Condition::True => Condition::True,
        Condition::Not(c) => Condition::Not(Box::new(left(l, k, r, c))),
        Condition::And(cs) => Condition::And(cs.iter().map(|c| left(l, k, r, c)).collect()),
        Condition::Or(cs) => Condition::Or(cs.iter().map(|c| left(l, k, r, c)).collect()),
        Condition::Exists(e) => {
            let (r2, sub) = avoid_ids(r, e.graph(), e.sub(), l);

            // p⁻¹ deletes r - k; those nodes must not touch new edges of r2
            for v in 0..r2.node_count() {
                let id = &r2.node(v).id;
                let deleted = r.node_index(id.as_str()).is_some() && k.node_index(id.as_str()).is_none();
                if !deleted {
                    continue;
                }
                let dangling = r2
                    .out_edges(v)
                    .iter()
                    .chain(r2.in_edges(v))
                    .any(|&x| r.edge_index(r2.edge(x).id.as_str()).is_none());
                if dangling {
                    return Condition::falsity();
                }
            }

            let keep_nodes: Vec<bool> = r2
                .nodes()
                .iter()
                .map(|n| r.node_index(n.id.as_str()).is_none() || k.node_index(n.id.as_str()).is_some())
                .collect();
            let keep_edges: Vec<bool> = r2
                .edges()
                .iter()
                .map(|x| r.edge_index(x.id.as_str()).is_none() || k.edge_index(x.id.as_str()).is_some())
                .collect();
            let k2 = r2.restrict(&keep_nodes, &keep_edges);
            let l2 = k2.union(l).expect("ids outside r were made disjoint from l");
            let from_l = l.inclusion_into(&l2).expect("l is part of l2");
            let sub = left(&l2, &k2, &r2, &sub);
            Condition::exists_unchecked(l2, from_l, sub)
        }
    }
}

/// Renames items of `r2 - r` whose ids are used by `l`, transporting `sub`.
fn avoid_ids(r: &TypedGraph, r2: &TypedGraph, sub: &Condition, l: &TypedGraph) -> (TypedGraph, Condition) {
    let clash_node = |id: &Id| r.node_index(id.as_str()).is_none() && l.node_index(id.as_str()).is_some();
    let clash_edge = |id: &Id| r.edge_index(id.as_str()).is_none() && l.edge_index(id.as_str()).is_some();
    if !r2.nodes().iter().any(|n| clash_node(&n.id)) && !r2.edges().iter().any(|e| clash_edge(&e.id)) {
        return (r2.clone(), sub.clone());
    }
    let mut taken_n: BTreeSet<Id> = r2.node_ids().union(&l.node_ids()).cloned().collect();
    let mut taken_e: BTreeSet<Id> = r2.edge_ids().union(&l.edge_ids()).cloned().collect();
    let node_ids: Vec<Id> = r2
        .nodes()
        .iter()
        .map(|n| {
            if clash_node(&n.id) {
                let id = fresh_id(n.id.as_str(), |s| taken_n.contains(s));
                taken_n.insert(id.clone());
                id
            } else {
                n.id.clone()
            }
        })
        .collect();
    let mut b = TypedGraph::builder();
    for (n, id) in r2.nodes().iter().zip(&node_ids) {
        b.add_node(id.clone(), n.ty.clone());
    }
    let mut edge_ids = Vec::new();
    for x in r2.edges() {
        let id = if clash_edge(&x.id) {
            let id = fresh_id(x.id.as_str(), |s| taken_e.contains(s));
            taken_e.insert(id.clone());
            id
        } else {
            x.id.clone()
        };
        b.add_edge(
            id.clone(),
            x.ty.clone(),
            node_ids[x.src].clone(),
            node_ids[x.tgt].clone(),
        );
        edge_ids.push(id);
    }
    let renamed = b.build().expect("renaming keeps the graph well formed");
    let iso = Morphism {
        nodes: node_ids
            .iter()
            .map(|id| renamed.node_index(id.as_str()).expect("present"))
            .collect(),
        edges: edge_ids
            .iter()
            .map(|id| renamed.edge_index(id.as_str()).expect("present"))
            .collect(),
    };
    let sub = transport(sub, &iso, &renamed);
    (renamed, sub)
}

/// `cpres(ρ, d) = Shift(∅ -> L, d) ⟹ Left(p, Shift(∅ -> R, d))`, simplified.
pub fn cpres(l: &TypedGraph, k: &TypedGraph, r: &TypedGraph, d: &Condition) -> Condition {
    let at_l = shift(&Morphism::empty(), d, l);
    let at_r = simplify(&shift(&Morphism::empty(), d, r));
    simplify(&at_l.implies(left(l, k, r, &at_r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::{equivalent, fixtures::*};

    #[test]
    fn left_of_true_is_true() {
        assert_eq!(left(&pl(), &pl(), &pl_tok_tk(), &Condition::True), Condition::True);
    }

    #[test]
    fn deleting_rule_reintroduces_context() {
        // p = ⟨Pl -tok-> Tk ⊇ Tk = Tk⟩ deletes the place. ∃(another container)
        // over R becomes ∃ over L of a token with two containers.
        let l = pl_tok_tk();
        let k = TypedGraph::builder().node("t", "Tk").build().unwrap();
        let r = k.clone();
        let container = TypedGraph::builder()
            .node("t", "Tk")
            .node("q", "Pl")
            .edge("f", "tok", "q", "t")
            .build()
            .unwrap();
        let ac = Condition::exists_plain(&r, container).unwrap();
        let Condition::Exists(e) = left(&l, &k, &r, &ac) else {
            panic!("expected ∃");
        };
        assert_eq!((e.graph().node_count(), e.graph().edge_count()), (3, 2));
    }

    #[test]
    fn inverse_rule_blocked_by_dangling_edge() {
        // p creates node t: L = Pl, K = Pl, R = Pl Tk. The inverse deletes t,
        // so any ∃ demanding a new edge at t is false.
        let l = pl();
        let k = pl();
        let r = pl_tk();
        let with_edge = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .node("q", "Pl")
            .edge("f", "tok", "q", "t")
            .build()
            .unwrap();
        let ac = Condition::exists_plain(&r, with_edge).unwrap();
        assert!(left(&l, &k, &r, &ac).is_false());
    }

    #[test]
    fn preservation_example() {
        // ρ = ⟨Pl Tk ⇒ Pl -tok-> Tk⟩, d = ∄(two containers)
        let l = pl_tk();
        let k = pl_tk();
        let r = pl_tok_tk();
        let d = Condition::not_exists(&TypedGraph::empty(), two_containers()).unwrap();
        let at_r = simplify(&shift(&Morphism::empty(), &d, &r));
        let left_r = simplify(&left(&l, &k, &r, &at_r));
        // first conjunct: no other place already contains the token
        let other = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .node("q", "Pl")
            .edge("f", "tok", "q", "t")
            .build()
            .unwrap();
        let expect = Condition::not_exists(&l, other).unwrap();
        let Condition::And(parts) = &left_r else {
            panic!("expected a conjunction, got {left_r}");
        };
        assert!(equivalent(&parts[0], &expect), "{}", parts[0]);
        let c = cpres(&l, &k, &r, &d);
        assert_eq!(c.validate(&l), Ok(()));
    }
}

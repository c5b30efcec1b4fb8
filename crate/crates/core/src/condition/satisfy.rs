use std::ops::ControlFlow;

use crate::{
    condition::Condition,
    graph::{for_each_match, Morphism, TypedGraph},
};

/// `p ⊨ c` for `p: A -> g`, where `c` is anchored at `A`.
pub fn satisfies(p: &Morphism, c: &Condition, g: &TypedGraph) -> bool {
    match c {
        Condition::True => true,
        Condition::Not(inner) => !satisfies(p, inner, g),
        Condition::And(cs) => cs.iter().all(|c| satisfies(p, c, g)),
        Condition::Or(cs) => cs.iter().any(|c| satisfies(p, c, g)),
        Condition::Exists(e) => {
            let c_graph = e.graph();
            let fixed = e
                .from_anchor()
                .inverse(c_graph.node_count(), c_graph.edge_count())
                .then_total(p);
            for_each_match(c_graph, g, &fixed, |q| {
                if satisfies(q, e.sub(), g) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .is_break()
        }
    }
}

/// `g ⊨ c` for a constraint `c` (anchored at the empty graph).
pub fn satisfies_constraint(g: &TypedGraph, c: &Condition) -> bool {
    satisfies(&Morphism::empty(), c, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::fixtures::*;

    #[test]
    fn true_holds_everywhere() {
        assert!(satisfies_constraint(&TypedGraph::empty(), &Condition::True));
        assert!(satisfies_constraint(&two_containers(), &Condition::True));
    }

    #[test]
    fn every_place_has_a_token() {
        let d = every_place_has_token();
        assert!(satisfies_constraint(&pl_tok_tk(), &d));
        assert!(!satisfies_constraint(&pl_tk(), &d));
        assert!(satisfies_constraint(&TypedGraph::empty(), &d));
    }

    #[test]
    fn two_containers_violate_negative_constraint() {
        let d = Condition::not_exists(&TypedGraph::empty(), two_containers()).unwrap();
        assert!(!satisfies_constraint(&two_containers(), &d));
        assert!(satisfies_constraint(&pl_tok_tk(), &d));
    }

    #[test]
    fn parallel_edges() {
        let d = Condition::not_exists(&TypedGraph::empty(), parallel_tok(2)).unwrap();
        assert!(!satisfies_constraint(&parallel_tok(3), &d));
        assert!(satisfies_constraint(&parallel_tok(1), &d));
        let none = Condition::not_exists(&TypedGraph::empty(), pl()).unwrap();
        assert!(satisfies_constraint(&TypedGraph::empty(), &none));
    }

    #[test]
    fn forall_agrees_with_definition() {
        let inner = Condition::exists_plain(&pl(), pl_tok_tk()).unwrap();
        let forall = Condition::forall(&TypedGraph::empty(), pl(), inner.clone()).unwrap();
        let expanded = Condition::exists(&TypedGraph::empty(), pl(), inner.negate())
            .unwrap()
            .negate();
        for g in [pl(), pl_tk(), pl_tok_tk(), two_containers()] {
            assert_eq!(satisfies_constraint(&g, &forall), satisfies_constraint(&g, &expanded));
        }
    }
}

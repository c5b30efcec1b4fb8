use std::ops::ControlFlow;

use crate::{
    condition::Condition,
    graph::{for_each_match, Morphism, PartialMorphism},
};

/// Syntactic equality up to renaming of quantified items.
///
/// Both conditions must share an anchor. Boolean structure is compared
/// positionally; each `∃` may be matched through any isomorphism of its
/// graph that fixes the anchor.
pub fn equivalent(c1: &Condition, c2: &Condition) -> bool {
    equiv_under(c1, c2, None)
}

fn equiv_under(c1: &Condition, c2: &Condition, phi: Option<&Morphism>) -> bool {
    match (c1, c2) {
        (Condition::True, Condition::True) => true,
        (Condition::Not(a), Condition::Not(b)) => equiv_under(a, b, phi),
        (Condition::And(xs), Condition::And(ys)) | (Condition::Or(xs), Condition::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| equiv_under(x, y, phi))
        }
        (Condition::Exists(e1), Condition::Exists(e2)) => {
            let (g1, g2) = (e1.graph(), e2.graph());
            if g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
                return false;
            }
            let (a1, a2) = (e1.from_anchor(), e2.from_anchor());
            if a1.nodes.len() != a2.nodes.len() || a1.edges.len() != a2.edges.len() {
                return false;
            }
            let mut fixed = PartialMorphism::undefined(g1.node_count(), g1.edge_count());
            for (i, &v) in a1.nodes.iter().enumerate() {
                let j = phi.map_or(i, |p| p.nodes[i]);
                fixed.nodes[v] = Some(a2.nodes[j]);
            }
            for (i, &e) in a1.edges.iter().enumerate() {
                let j = phi.map_or(i, |p| p.edges[i]);
                fixed.edges[e] = Some(a2.edges[j]);
            }
            for_each_match(g1, g2, &fixed, |psi| {
                if equiv_under(e1.sub(), e2.sub(), Some(psi)) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .is_break()
        }
        _ => false,
    }
}

use crate::{
    condition::{shift, simplify, Condition},
    graph::{enumerate_extensions, subgraphs_between, Morphism, TypedGraph},
    program::{PlainRule, Rule},
    repair::RepairError,
};

/// `R_a`: one rule `⟨b, B ⇒ C, ac ∧ ac_B, a⟩` per intermediate graph
/// `A ⊆ B ⊂ C`, up to isomorphism of spans fixing `A`.
pub fn repairing_set_exists(a: &TypedGraph, c: &TypedGraph) -> Result<Vec<Rule>, RepairError> {
    let not_a = Condition::not_exists(a, c.clone())?;
    let bs = dedupe_up_to_span_iso(a, c, subgraphs_between(a, c)?);
    let mut rules = Vec::with_capacity(bs.len());
    for b in bs {
        let inc = a.inclusion_into(&b).expect("A ⊆ B");
        let mut parts = vec![shift(&inc, &not_a, &b)];
        for larger in strictly_larger(&b, c)? {
            parts.push(Condition::not_exists(&b, larger)?);
        }
        let ac = simplify(&Condition::and(parts));
        let plain = PlainRule::new(b.clone(), b.clone(), c.clone())?;
        let name = format!("add{}", difference(c, &b));
        rules.push(Rule::new(name, plain, a.clone(), a.clone(), ac)?);
    }
    Ok(rules)
}

/// `S_a`: rules `⟨a, C ⇒ B, b⟩` deleting exactly one edge of `C - A` if
/// there is one, otherwise exactly one node. The rules are DPO; the
/// construction turns on SPO mode where it needs `S_a′`.
pub fn repairing_set_absence(a: &TypedGraph, c: &TypedGraph) -> Result<Vec<Rule>, RepairError> {
    absence_rules(a, c, a)
}

/// `S_a^id`: like [`repairing_set_absence`] but with the left interface
/// `id_C`, so the rules consume a marked occurrence of `C` and hand back `A`.
pub fn repairing_set_absence_at(a: &TypedGraph, c: &TypedGraph) -> Result<Vec<Rule>, RepairError> {
    absence_rules(a, c, c)
}

fn absence_rules(a: &TypedGraph, c: &TypedGraph, x: &TypedGraph) -> Result<Vec<Rule>, RepairError> {
    let extra_edges = c.edge_count() > a.edge_count();
    let candidates = subgraphs_between(a, c)?
        .into_iter()
        .filter(|b| {
            if extra_edges {
                b.node_count() == c.node_count() && b.edge_count() + 1 == c.edge_count()
            } else {
                b.node_count() + 1 == c.node_count()
            }
        })
        .collect();
    let mut rules = Vec::new();
    for b in dedupe_up_to_span_iso(a, c, candidates) {
        let plain = PlainRule::new(c.clone(), b.clone(), b.clone())?;
        let name = format!("del{}", difference(c, &b));
        rules.push(Rule::new(name, plain, x.clone(), a.clone(), Condition::True)?);
    }
    Ok(rules)
}

/// Graphs `B′` with `B ⊂ B′ ⊆ C`.
fn strictly_larger(b: &TypedGraph, c: &TypedGraph) -> Result<Vec<TypedGraph>, RepairError> {
    if b.size() == c.size() {
        return Ok(Vec::new());
    }
    let mut out: Vec<TypedGraph> = subgraphs_between(b, c)?
        .into_iter()
        .filter(|x| x.size() > b.size())
        .collect();
    out.push(c.clone());
    Ok(out)
}

/// Keeps the first of every group of subgraphs related by an automorphism
/// of `C` that fixes `A`.
fn dedupe_up_to_span_iso(a: &TypedGraph, c: &TypedGraph, bs: Vec<TypedGraph>) -> Vec<TypedGraph> {
    let inc = a.inclusion_into(c).expect("A ⊆ C");
    let autos: Vec<Morphism> = enumerate_extensions(a, c, &inc, c);
    let mut kept: Vec<TypedGraph> = Vec::new();
    for b in bs {
        let duplicate = kept
            .iter()
            .any(|k| autos.iter().any(|phi| image(k, c, phi) == item_set(&b, c)));
        if !duplicate {
            kept.push(b);
        }
    }
    kept
}

type ItemSet = (Vec<usize>, Vec<usize>);

fn item_set(b: &TypedGraph, c: &TypedGraph) -> ItemSet {
    let m = b.inclusion_into(c).expect("B ⊆ C");
    let (mut n, mut e) = (m.nodes, m.edges);
    n.sort_unstable();
    e.sort_unstable();
    (n, e)
}

fn image(b: &TypedGraph, c: &TypedGraph, phi: &Morphism) -> ItemSet {
    let (n, e) = item_set(b, c);
    let mut n: Vec<usize> = n.into_iter().map(|v| phi.nodes[v]).collect();
    let mut e: Vec<usize> = e.into_iter().map(|x| phi.edges[x]).collect();
    n.sort_unstable();
    e.sort_unstable();
    (n, e)
}

/// `[ids of C - B]`, for rule names.
fn difference(c: &TypedGraph, b: &TypedGraph) -> String {
    let ids: Vec<&str> = c
        .nodes()
        .iter()
        .filter(|n| b.node_index(n.id.as_str()).is_none())
        .map(|n| n.id.as_str())
        .chain(
            c.edges()
                .iter()
                .filter(|x| b.edge_index(x.id.as_str()).is_none())
                .map(|x| x.id.as_str()),
        )
        .collect();
    format!("[{}]", ids.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::{equivalent, fixtures::*};

    #[test]
    fn r_b_has_two_rules() {
        let rules = repairing_set_exists(&pl(), &pl_tok_tk()).unwrap();
        assert_eq!(rules.len(), 2);
        let (r1, r2) = (&rules[0], &rules[1]);
        assert_eq!(r1.lhs(), &pl());
        assert_eq!(r2.lhs(), &pl_tk());
        assert!(rules.iter().all(Rule::is_increasing));

        assert!(equivalent(r1.ac(), &Condition::not_exists(&pl(), pl_tk()).unwrap()));

        let t2 = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .node("t2", "Tk")
            .edge("e", "tok", "p", "t2")
            .build()
            .unwrap();
        let expected = Condition::and([
            Condition::not_exists(&pl_tk(), pl_tok_tk()).unwrap(),
            Condition::not_exists(&pl_tk(), t2).unwrap(),
        ]);
        assert!(equivalent(r2.ac(), &expected), "{}", r2.ac());
    }

    #[test]
    fn single_node_from_empty() {
        let rules = repairing_set_exists(&TypedGraph::empty(), &pl()).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].lhs(), &TypedGraph::empty());
    }

    #[test]
    fn parallel_edges_give_one_deleter() {
        let rules = repairing_set_absence(&TypedGraph::empty(), &parallel_tok(2)).unwrap();
        assert_eq!(rules.len(), 1);
        let r = &rules[0];
        assert!(r.is_decreasing());
        assert_eq!(r.rhs().node_count(), 2);
        assert_eq!(r.rhs().edge_count(), 1);
    }

    #[test]
    fn edgeless_absence_deletes_node() {
        let rules = repairing_set_absence(&TypedGraph::empty(), &pl()).unwrap();
        assert_eq!(rules.len(), 1);
        assert!(rules[0].rhs().is_empty());
    }

    #[test]
    fn non_real_inclusion_is_rejected() {
        assert!(repairing_set_exists(&pl(), &pl()).is_err());
        assert!(repairing_set_absence(&pl(), &pl()).is_err());
    }

    #[test]
    fn absence_at_uses_the_whole_occurrence() {
        let rules = repairing_set_absence_at(&TypedGraph::empty(), &pl()).unwrap();
        assert_eq!(rules[0].left_interface(), &pl());
        assert!(rules[0].right_interface().is_empty());
    }
}

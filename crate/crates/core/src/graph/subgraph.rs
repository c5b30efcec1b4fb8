use crate::graph::{GraphError, TypedGraph};

/// All graphs `B` with `A ⊆ B ⊂ C`, inclusions by id, ordered by node count,
/// edge count and then ids.
pub fn subgraphs_between(a: &TypedGraph, c: &TypedGraph) -> Result<Vec<TypedGraph>, GraphError> {
    let inc = a
        .inclusion_into(c)
        .ok_or_else(|| GraphError::NotSubgraph(format!("{a:?}")))?;
    if a.size() == c.size() {
        return Err(GraphError::NotReal);
    }
    let mut in_a_nodes = vec![false; c.node_count()];
    let mut in_a_edges = vec![false; c.edge_count()];
    inc.nodes.iter().for_each(|&v| in_a_nodes[v] = true);
    inc.edges.iter().for_each(|&e| in_a_edges[e] = true);
    let extra_nodes: Vec<usize> = (0..c.node_count()).filter(|&v| !in_a_nodes[v]).collect();
    let extra_edges: Vec<usize> = (0..c.edge_count()).filter(|&e| !in_a_edges[e]).collect();
    assert!(
        extra_nodes.len() < 32 && extra_edges.len() < 32,
        "condition graphs are expected to be small"
    );

    let mut out = Vec::new();
    for nmask in 0u32..(1 << extra_nodes.len()) {
        let mut keep_nodes = in_a_nodes.clone();
        for (bit, &v) in extra_nodes.iter().enumerate() {
            keep_nodes[v] = nmask & (1 << bit) != 0;
        }
        let allowed: Vec<usize> = extra_edges
            .iter()
            .copied()
            .filter(|&e| keep_nodes[c.edge(e).src] && keep_nodes[c.edge(e).tgt])
            .collect();
        for emask in 0u32..(1 << allowed.len()) {
            let mut keep_edges = in_a_edges.clone();
            for (bit, &e) in allowed.iter().enumerate() {
                keep_edges[e] = emask & (1 << bit) != 0;
            }
            let b = c.restrict(&keep_nodes, &keep_edges);
            if b.size() < c.size() {
                out.push(b);
            }
        }
    }
    out.sort_by(|x, y| {
        (x.node_count(), x.edge_count())
            .cmp(&(y.node_count(), y.edge_count()))
            .then_with(|| x.node_ids().cmp(&y.node_ids()))
            .then_with(|| x.edge_ids().cmp(&y.edge_ids()))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn place_to_token_has_two_intermediates() {
        let a = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let c = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap();
        let bs = subgraphs_between(&a, &c).unwrap();
        assert_eq!(bs.len(), 2);
        assert_eq!(bs[0], a);
        assert_eq!((bs[1].node_count(), bs[1].edge_count()), (2, 0));
    }

    #[test]
    fn empty_to_node() {
        let c = TypedGraph::builder().node("v", "Pl").build().unwrap();
        let bs = subgraphs_between(&TypedGraph::empty(), &c).unwrap();
        assert_eq!(bs, vec![TypedGraph::empty()]);
    }

    #[test]
    fn rejects_equal_and_foreign_graphs() {
        let c = TypedGraph::builder().node("v", "Pl").build().unwrap();
        assert_eq!(subgraphs_between(&c, &c), Err(GraphError::NotReal));
        let other = TypedGraph::builder().node("w", "Pl").build().unwrap();
        assert!(matches!(subgraphs_between(&other, &c), Err(GraphError::NotSubgraph(_))));
    }
}

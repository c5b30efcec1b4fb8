//! Graphviz output.
//!
//! Containment edges get a diamond at their source. An edge whose type has
//! an opposite is drawn together with a matching reverse edge, if there is
//! one, as a single bidirectional edge carrying both labels.

use std::fmt::Write;

use graph_mend_core::{TypeGraph, TypedGraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn type_graph_dot(tg: &TypeGraph) -> String {
    let mut out = String::from("digraph types {\n  node [shape=box];\n");
    for n in &tg.nodes {
        let _ = writeln!(out, "  {};", quote(n.as_str()));
    }
    let mut done = vec![false; tg.edges.len()];
    for (i, e) in tg.edges.iter().enumerate() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let partner = tg.opposite_of(e.id.as_str()).and_then(|o| {
            tg.edges
                .iter()
                .enumerate()
                .find(|(j, x)| !done[*j] && x.id == *o)
                .map(|(j, _)| j)
        });
        let (src, tgt) = (quote(e.src.as_str()), quote(e.tgt.as_str()));
        match partner {
            Some(j) => {
                done[j] = true;
                let o = &tg.edges[j];
                let _ = writeln!(
                    out,
                    "  {src} -> {tgt} [dir=both, {}headlabel={}, taillabel={}];",
                    arrow_tails(tg.is_containment(e.id.as_str()), tg.is_containment(o.id.as_str())),
                    quote(e.id.as_str()),
                    quote(o.id.as_str()),
                );
            }
            None if tg.is_containment(e.id.as_str()) => {
                let _ = writeln!(
                    out,
                    "  {src} -> {tgt} [dir=both, arrowtail=diamond, label={}];",
                    quote(e.id.as_str())
                );
            }
            None => {
                let _ = writeln!(out, "  {src} -> {tgt} [label={}];", quote(e.id.as_str()));
            }
        }
    }
    out.push_str("}\n");
    out
}

// A containment edge in a merged pair puts its diamond at its own source,
// which is the tail for the forward edge and the head for the reverse one.
fn arrow_tails(forward: bool, reverse: bool) -> String {
    match (forward, reverse) {
        (true, true) => "arrowtail=diamond, arrowhead=diamond, ".into(),
        (true, false) => "arrowtail=diamond, ".into(),
        (false, true) => "arrowhead=diamond, ".into(),
        (false, false) => String::new(),
    }
}

pub fn graph_dot(g: &TypedGraph, tg: &TypeGraph) -> String {
    let mut out = String::from("digraph G {\n  node [shape=box];\n");
    for n in g.nodes() {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(n.id.as_str()),
            quote(&format!("{} : {}", n.id, n.ty))
        );
    }
    let mut done = vec![false; g.edge_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let label = format!("{} : {}", e.id, e.ty);
        let partner = tg.opposite_of(e.ty.as_str()).and_then(|o| {
            g.out_edges(e.tgt)
                .iter()
                .copied()
                .find(|&j| !done[j] && g.edge(j).tgt == e.src && g.edge(j).ty == *o)
        });
        let (src, tgt) = (quote(g.node(e.src).id.as_str()), quote(g.node(e.tgt).id.as_str()));
        match partner {
            Some(j) => {
                done[j] = true;
                let o = g.edge(j);
                let _ = writeln!(
                    out,
                    "  {src} -> {tgt} [dir=both, {}headlabel={}, taillabel={}];",
                    arrow_tails(tg.is_containment(e.ty.as_str()), tg.is_containment(o.ty.as_str())),
                    quote(&label),
                    quote(&format!("{} : {}", o.id, o.ty)),
                );
            }
            None if tg.is_containment(e.ty.as_str()) => {
                let _ = writeln!(
                    out,
                    "  {src} -> {tgt} [dir=both, arrowtail=diamond, label={}];",
                    quote(&label)
                );
            }
            None => {
                let _ = writeln!(out, "  {src} -> {tgt} [label={}];", quote(&label));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use graph_mend_core::petri;

    use super::*;

    #[test]
    fn opposites_merge() {
        let g = TypedGraph::builder()
            .node("p", "Pl")
            .node("a", "PTArc")
            .edge("x", "pt_src", "a", "p")
            .edge("y", "pl_out", "p", "a")
            .build()
            .unwrap();
        let tg = petri::type_graph();
        let dot = graph_dot(&g, &tg);
        assert_eq!(dot.matches("->").count(), 1, "{dot}");
        assert!(dot.contains("headlabel"));
    }

    #[test]
    fn containment_gets_diamond() {
        let g = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap();
        let dot = graph_dot(&g, &petri::type_graph());
        assert!(dot.contains("\"p\" -> \"t\" [dir=both, arrowtail=diamond"), "{dot}");
    }

    #[test]
    fn type_graph_pairs_are_drawn_once() {
        let tg = petri::type_graph();
        let dot = type_graph_dot(&tg);
        let pairs = tg.opposites.len() / 2;
        assert_eq!(dot.matches("->").count(), tg.edges.len() - pairs);
    }
}

//! The Petri-net type graph used throughout the examples and tests.

use crate::graph::TypeGraph;

/// Petri nets with places, transitions, tokens and arcs.
///
/// `PN` contains places, transitions and both arc kinds; places contain
/// tokens. Arcs are linked to their endpoints by pairs of opposite edges.
pub fn type_graph() -> TypeGraph {
    TypeGraph::default()
        .node("PN")
        .node("Pl")
        .node("Tr")
        .node("Tk")
        .node("PTArc")
        .node("TPArc")
        .containment_edge("places", "PN", "Pl")
        .containment_edge("trans", "PN", "Tr")
        .containment_edge("ptarcs", "PN", "PTArc")
        .containment_edge("tparcs", "PN", "TPArc")
        .containment_edge("tok", "Pl", "Tk")
        .edge("pt_src", "PTArc", "Pl")
        .edge("pl_out", "Pl", "PTArc")
        .edge("pt_tgt", "PTArc", "Tr")
        .edge("tr_in", "Tr", "PTArc")
        .edge("tp_src", "TPArc", "Tr")
        .edge("tr_out", "Tr", "TPArc")
        .edge("tp_tgt", "TPArc", "Pl")
        .edge("pl_in", "Pl", "TPArc")
        .opposite("pt_src", "pl_out")
        .opposite("pt_tgt", "tr_in")
        .opposite("tp_src", "tr_out")
        .opposite("tp_tgt", "pl_in")
}

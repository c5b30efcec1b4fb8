use std::{collections::BTreeSet, ops::ControlFlow};

use crate::{
    condition::{satisfies, simplify, Condition},
    graph::{for_each_match, Morphism, PartialMorphism, TypedGraph},
    id::{fresh_id, Id},
    program::{LocatedGraph, ProgramError},
};

/// `⟨L ⊇ K ⊆ R⟩`, with both inclusions given by ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlainRule {
    l: TypedGraph,
    k: TypedGraph,
    r: TypedGraph,
}

impl PlainRule {
    pub fn new(l: TypedGraph, k: TypedGraph, r: TypedGraph) -> Result<Self, ProgramError> {
        for (sub, sup) in [(&k, &l), (&k, &r)] {
            if !sub.is_subgraph_of(sup) {
                return Err(ProgramError::NotSubgraph(format!("{sub:?}"), format!("{sup:?}")));
            }
        }
        Ok(PlainRule { l, k, r })
    }

    /// `⟨G ⊇ G ⊆ G⟩`.
    pub fn identity(g: TypedGraph) -> Self {
        PlainRule {
            l: g.clone(),
            k: g.clone(),
            r: g,
        }
    }

    pub fn lhs(&self) -> &TypedGraph {
        &self.l
    }

    pub fn interface(&self) -> &TypedGraph {
        &self.k
    }

    pub fn rhs(&self) -> &TypedGraph {
        &self.r
    }

    /// `⟨R ⊇ K ⊆ L⟩`.
    pub fn inverse(&self) -> PlainRule {
        PlainRule {
            l: self.r.clone(),
            k: self.k.clone(),
            r: self.l.clone(),
        }
    }
}

/// `⟨x, p, ac, y⟩` with interfaces `X ⊆ L` and `Y ⊆ R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    name: String,
    plain: PlainRule,
    x: TypedGraph,
    x_map: Morphism,
    y: TypedGraph,
    y_map: Morphism,
    ac: Condition,
    spo: bool,
}

/// One direct transformation.
#[derive(Debug, Clone)]
pub struct Step {
    /// `H` marked by `h = h' ∘ y`.
    pub result: LocatedGraph,
    pub matched: Morphism,
    pub comatch: Morphism,
    /// `i: X ⇀ Y`.
    pub interface_map: PartialMorphism,
}

impl Rule {
    pub fn new(
        name: impl Into<String>,
        plain: PlainRule,
        x: TypedGraph,
        y: TypedGraph,
        ac: Condition,
    ) -> Result<Self, ProgramError> {
        let x_map = x
            .inclusion_into(plain.lhs())
            .ok_or_else(|| ProgramError::NotSubgraph(format!("{x:?}"), format!("{:?}", plain.lhs())))?;
        let y_map = y
            .inclusion_into(plain.rhs())
            .ok_or_else(|| ProgramError::NotSubgraph(format!("{y:?}"), format!("{:?}", plain.rhs())))?;
        ac.validate(plain.lhs())?;
        Ok(Rule {
            name: name.into(),
            plain,
            x,
            x_map,
            y,
            y_map,
            ac,
            spo: false,
        })
    }

    /// A rule with empty interfaces and no application condition.
    pub fn plain(name: impl Into<String>, plain: PlainRule) -> Self {
        Self::new(name, plain, TypedGraph::empty(), TypedGraph::empty(), Condition::True)
            .expect("empty interfaces always fit")
    }

    /// `select(a, ac) = ⟨a, id_C, ac⟩`.
    pub fn select(a: &TypedGraph, c: &TypedGraph, ac: Condition) -> Result<Self, ProgramError> {
        Self::new("select", PlainRule::identity(c.clone()), a.clone(), c.clone(), ac)
    }

    /// `unselect(a) = ⟨id_C, a⟩`.
    pub fn unselect(a: &TypedGraph, c: &TypedGraph) -> Result<Self, ProgramError> {
        Self::new(
            "unselect",
            PlainRule::identity(c.clone()),
            c.clone(),
            a.clone(),
            Condition::True,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn plain_rule(&self) -> &PlainRule {
        &self.plain
    }

    pub fn lhs(&self) -> &TypedGraph {
        self.plain.lhs()
    }

    pub fn interface(&self) -> &TypedGraph {
        self.plain.interface()
    }

    pub fn rhs(&self) -> &TypedGraph {
        self.plain.rhs()
    }

    pub fn left_interface(&self) -> &TypedGraph {
        &self.x
    }

    pub fn right_interface(&self) -> &TypedGraph {
        &self.y
    }

    pub fn left_interface_map(&self) -> &Morphism {
        &self.x_map
    }

    pub fn right_interface_map(&self) -> &Morphism {
        &self.y_map
    }

    pub fn ac(&self) -> &Condition {
        &self.ac
    }

    pub fn is_spo(&self) -> bool {
        self.spo
    }

    /// The same rule under the dangling-edges operator.
    pub fn with_spo(mut self, spo: bool) -> Self {
        self.spo = spo;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the application condition; `ac` must be anchored at `L`.
    pub fn with_ac(mut self, ac: Condition) -> Result<Self, ProgramError> {
        ac.validate(self.lhs())?;
        self.ac = ac;
        Ok(self)
    }

    /// Adds a conjunct to the application condition.
    pub fn and_ac(self, extra: Condition) -> Result<Self, ProgramError> {
        let ac = simplify(&Condition::and([self.ac.clone(), extra]));
        self.with_ac(ac)
    }

    /// `i = y⁻¹ ∘ r ∘ l⁻¹ ∘ x`, followed by ids.
    pub fn interface_map(&self) -> PartialMorphism {
        let (k, y) = (self.interface(), &self.y);
        PartialMorphism {
            nodes: self
                .x
                .nodes()
                .iter()
                .map(|n| k.node_index(n.id.as_str()).and(y.node_index(n.id.as_str())))
                .collect(),
            edges: self
                .x
                .edges()
                .iter()
                .map(|e| k.edge_index(e.id.as_str()).and(y.edge_index(e.id.as_str())))
                .collect(),
        }
    }

    /// `L ≅ K ⊂ R`.
    pub fn is_increasing(&self) -> bool {
        self.lhs().size() == self.interface().size() && self.interface().size() < self.rhs().size()
    }

    /// `L ⊃ K ≅ R`.
    pub fn is_decreasing(&self) -> bool {
        self.rhs().size() == self.interface().size() && self.interface().size() < self.lhs().size()
    }

    pub fn is_identity(&self) -> bool {
        self.lhs().size() == self.interface().size() && self.rhs().size() == self.interface().size()
    }

    /// Whether some application creates or deletes a node.
    pub fn changes_nodes(&self) -> bool {
        let k = self.interface().node_count();
        self.lhs().node_count() != k || self.rhs().node_count() != k
    }

    /// All matches `g': L -> G` with `g' ∘ x = g` where defined, satisfying
    /// the dangling condition (unless in SPO mode) and `ac`; sorted.
    pub fn matches(&self, lg: &LocatedGraph) -> Vec<Morphism> {
        let (l, g) = (self.lhs(), &lg.graph);
        let mut fixed = PartialMorphism::undefined(l.node_count(), l.edge_count());
        for (j, &v) in self.x_map.nodes.iter().enumerate() {
            fixed.nodes[v] = lg.marking.nodes.get(j).copied().flatten();
        }
        for (j, &e) in self.x_map.edges.iter().enumerate() {
            fixed.edges[e] = lg.marking.edges.get(j).copied().flatten();
        }
        let deleted: Vec<usize> = (0..l.node_count())
            .filter(|&v| self.interface().node_index(l.node(v).id.as_str()).is_none())
            .collect();
        let mut out = Vec::new();
        let _ = for_each_match(l, g, &fixed, |m| {
            if (self.spo || dangling_free(l, g, m, &deleted)) && satisfies(m, &self.ac, g) {
                out.push(m.clone());
            }
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    /// Applies the plain rule at `m` (deleting dangling edges first in SPO
    /// mode). Returns `H` and the comatch `h': R -> H`.
    ///
    /// New items get the id of their `R` item, suffixed if that id is taken
    /// in `G`.
    pub fn apply_at(&self, g: &TypedGraph, m: &Morphism) -> (TypedGraph, Morphism) {
        let (l, k, r) = (self.lhs(), self.interface(), self.rhs());
        let mut del_nodes = vec![false; g.node_count()];
        let mut del_edges = vec![false; g.edge_count()];
        for (v, n) in l.nodes().iter().enumerate() {
            if k.node_index(n.id.as_str()).is_none() {
                del_nodes[m.nodes[v]] = true;
            }
        }
        for (e, x) in l.edges().iter().enumerate() {
            if k.edge_index(x.id.as_str()).is_none() {
                del_edges[m.edges[e]] = true;
            }
        }
        for (e, x) in g.edges().iter().enumerate() {
            if del_nodes[x.src] || del_nodes[x.tgt] {
                debug_assert!(self.spo || del_edges[e], "dangling edge at a DPO match");
                del_edges[e] = true;
            }
        }

        let mut b = TypedGraph::builder();
        for (v, n) in g.nodes().iter().enumerate() {
            if !del_nodes[v] {
                b.add_node(n.id.clone(), n.ty.clone());
            }
        }
        for (e, x) in g.edges().iter().enumerate() {
            if !del_edges[e] {
                b.add_edge(
                    x.id.clone(),
                    x.ty.clone(),
                    g.node(x.src).id.clone(),
                    g.node(x.tgt).id.clone(),
                );
            }
        }

        let mut taken: BTreeSet<Id> = g.node_ids();
        let r_node_ids: Vec<Id> = r
            .nodes()
            .iter()
            .map(|n| match k.node_index(n.id.as_str()) {
                Some(_) => {
                    let lv = l.node_index(n.id.as_str()).expect("K ⊆ L");
                    g.node(m.nodes[lv]).id.clone()
                }
                None => {
                    let id = fresh_id(n.id.as_str(), |s| taken.contains(s));
                    taken.insert(id.clone());
                    b.add_node(id.clone(), n.ty.clone());
                    id
                }
            })
            .collect();
        let mut taken: BTreeSet<Id> = g.edge_ids();
        let r_edge_ids: Vec<Id> = r
            .edges()
            .iter()
            .map(|x| match k.edge_index(x.id.as_str()) {
                Some(_) => {
                    let le = l.edge_index(x.id.as_str()).expect("K ⊆ L");
                    g.edge(m.edges[le]).id.clone()
                }
                None => {
                    let id = fresh_id(x.id.as_str(), |s| taken.contains(s));
                    taken.insert(id.clone());
                    b.add_edge(
                        id.clone(),
                        x.ty.clone(),
                        r_node_ids[x.src].clone(),
                        r_node_ids[x.tgt].clone(),
                    );
                    id
                }
            })
            .collect();

        let h = b.build().expect("rewriting keeps the graph well formed");
        let comatch = Morphism {
            nodes: r_node_ids
                .iter()
                .map(|id| h.node_index(id.as_str()).expect("present"))
                .collect(),
            edges: r_edge_ids
                .iter()
                .map(|id| h.edge_index(id.as_str()).expect("present"))
                .collect(),
        };
        (h, comatch)
    }

    /// All direct transformations from `lg`, in match order.
    pub fn apply(&self, lg: &LocatedGraph) -> Vec<Step> {
        let i = self.interface_map();
        self.matches(lg)
            .into_iter()
            .map(|m| {
                let (h, comatch) = self.apply_at(&lg.graph, &m);
                let marking = self.y_map.then(&comatch).to_partial();
                Step {
                    result: LocatedGraph::new(h, marking),
                    matched: m,
                    comatch,
                    interface_map: i.clone(),
                }
            })
            .collect()
    }
}

/// No edge outside `m(L)` touches a node of `m(L - K)`.
fn dangling_free(l: &TypedGraph, g: &TypedGraph, m: &Morphism, deleted: &[usize]) -> bool {
    deleted.iter().all(|&v| {
        let w = m.nodes[v];
        let touching =
            g.out_edges(w).len() + g.in_edges(w).len() - g.out_edges(w).iter().filter(|&&e| g.edge(e).tgt == w).count();
        let in_match = (0..l.edge_count())
            .filter(|&e| {
                let x = l.edge(e);
                x.src == v || x.tgt == v
            })
            .count();
        touching == in_match
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parallel(n: usize) -> TypedGraph {
        let mut b = TypedGraph::builder().node("p", "Pl").node("t", "Tk");
        for i in 0..n {
            b = b.edge(format!("e{i}"), "tok", "p", "t");
        }
        b.build().unwrap()
    }

    fn pl_tok_tk() -> TypedGraph {
        TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap()
    }

    #[test]
    fn identity_rule_is_a_no_op() {
        let g = parallel(2);
        let skip = Rule::plain("id", PlainRule::identity(TypedGraph::empty()));
        let steps = skip.apply(&LocatedGraph::unmarked(g.clone()));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].result.graph, g);
    }

    #[test]
    fn parallel_edge_deletion_has_two_matches() {
        // ⟨p ⇉ t ⇒ p → t⟩ on exactly two parallel edges
        let l = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e0", "tok", "p", "t")
            .edge("e1", "tok", "p", "t")
            .build()
            .unwrap();
        let k = TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e0", "tok", "p", "t")
            .build()
            .unwrap();
        let rule = Rule::plain("del", PlainRule::new(l, k.clone(), k).unwrap());
        let steps = rule.apply(&LocatedGraph::unmarked(parallel(2)));
        assert_eq!(steps.len(), 2);
        let survivors: BTreeSet<_> = steps
            .iter()
            .map(|s| {
                assert_eq!(s.result.graph.edge_count(), 1);
                s.result.graph.edge(0).id.clone()
            })
            .collect();
        assert_eq!(survivors.len(), 2);
    }

    #[test]
    fn dangling_condition_blocks_dpo_but_not_spo() {
        let l = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let e = TypedGraph::empty();
        let rule = Rule::plain("delPl", PlainRule::new(l.clone(), e.clone(), e.clone()).unwrap());
        let g = LocatedGraph::unmarked(pl_tok_tk());
        assert!(rule.apply(&g).is_empty());
        let steps = rule.clone().with_spo(true).apply(&g);
        assert_eq!(steps.len(), 1);
        let h = &steps[0].result.graph;
        assert_eq!((h.node_count(), h.edge_count()), (1, 0));
        assert_eq!(h.node(0).ty, "Tk");
        // isolated node: both modes agree
        let lone = LocatedGraph::unmarked(l);
        assert_eq!(
            rule.apply(&lone)[0].result.graph,
            rule.with_spo(true).apply(&lone)[0].result.graph
        );
    }

    #[test]
    fn creation_uses_fresh_ids_and_interfaces_follow() {
        let pl = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let rule = Rule::new(
            "addTk",
            PlainRule::new(pl.clone(), pl.clone(), pl_tok_tk()).unwrap(),
            pl.clone(),
            pl.clone(),
            Condition::True,
        )
        .unwrap();
        let host = TypedGraph::builder()
            .node("p", "Pl")
            .node("q", "Pl")
            .node("t", "Tk")
            .build()
            .unwrap();
        let marked = LocatedGraph::new(
            host.clone(),
            PartialMorphism {
                nodes: vec![Some(host.node_index("q").unwrap())],
                edges: vec![],
            },
        );
        let steps = rule.apply(&marked);
        assert_eq!(steps.len(), 1);
        let h = &steps[0].result.graph;
        assert!(h.node_index("t_1").is_some());
        assert_eq!(h.edge(0).id, "e");
        assert_eq!(h.edge_source(0).id, "q");
        let v = steps[0].result.marking.nodes[0].unwrap();
        assert_eq!(h.node(v).id, "q");
        assert_eq!(steps[0].interface_map.nodes, vec![Some(0)]);
        assert!(rule.is_increasing() && !rule.is_decreasing());
    }

    #[test]
    fn select_respects_condition() {
        let pl = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let no_token = Condition::not_exists(&pl, pl_tok_tk()).unwrap();
        let sel = Rule::select(&TypedGraph::empty(), &pl, no_token).unwrap();
        assert!(sel.apply(&LocatedGraph::unmarked(pl_tok_tk())).is_empty());
        let steps = sel.apply(&LocatedGraph::unmarked(pl.clone()));
        assert_eq!(steps.len(), 1);
        let uns = Rule::unselect(&TypedGraph::empty(), &pl).unwrap();
        let back = uns.apply(&steps[0].result);
        assert_eq!(back.len(), 1);
        assert!(back[0].result.marking.nodes.is_empty());
    }
}

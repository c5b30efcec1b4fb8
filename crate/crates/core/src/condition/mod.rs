//! Nested graph conditions.
//!
//! A condition is always read relative to an anchor graph `A` that is not
//! stored in the condition itself. `∃(a, c)` stores the codomain `C` of the
//! inclusion `a: A ⊂ C` (by ids) together with the position map of `A` in
//! `C`, and its subcondition `c` is anchored at `C`.

mod classify;
mod equiv;
mod left;
mod satisfy;
mod shift;
mod simplify;

use std::fmt;

pub use classify::{classify, classify_with, ConditionClass, LegitOracle, Quant, Quantified, SyntacticOracle};
pub use equiv::equivalent;
pub use left::{cpres, left};
pub use satisfy::{satisfies, satisfies_constraint};
pub use shift::{shift, transport};
pub use simplify::simplify;

use crate::graph::{Morphism, TypedGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionError {
    #[error("anchor is not a subgraph of the quantified graph {0}")]
    NotSubgraph(String),
    #[error("∃(a, c) needs a real inclusion, but anchor and graph coincide: {0}")]
    NotReal(String),
    #[error("condition is anchored at {expected} but used over {found}")]
    AnchorMismatch { expected: String, found: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    True,
    Exists(Box<Exists>),
    Not(Box<Condition>),
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exists {
    graph: TypedGraph,
    from_anchor: Morphism,
    sub: Condition,
}

impl Exists {
    /// The codomain `C` of the quantified inclusion.
    pub fn graph(&self) -> &TypedGraph {
        &self.graph
    }

    /// Positions of the anchor's items inside [`Exists::graph`].
    pub fn from_anchor(&self) -> &Morphism {
        &self.from_anchor
    }

    pub fn sub(&self) -> &Condition {
        &self.sub
    }

    /// The anchor graph, recovered as the image of `from_anchor`.
    pub fn anchor(&self) -> TypedGraph {
        let mut keep_n = vec![false; self.graph.node_count()];
        let mut keep_e = vec![false; self.graph.edge_count()];
        self.from_anchor.nodes.iter().for_each(|&v| keep_n[v] = true);
        self.from_anchor.edges.iter().for_each(|&e| keep_e[e] = true);
        self.graph.restrict(&keep_n, &keep_e)
    }
}

impl Condition {
    /// `∃(a, sub)` for the inclusion of `anchor` into `graph`.
    pub fn exists(anchor: &TypedGraph, graph: TypedGraph, sub: Condition) -> Result<Self, ConditionError> {
        let from_anchor = anchor
            .inclusion_into(&graph)
            .ok_or_else(|| ConditionError::NotSubgraph(format!("{graph:?}")))?;
        if anchor.size() == graph.size() {
            return Err(ConditionError::NotReal(format!("{graph:?}")));
        }
        Ok(Condition::Exists(Box::new(Exists {
            graph,
            from_anchor,
            sub,
        })))
    }

    /// `∃a`, short for `∃(a, true)`.
    pub fn exists_plain(anchor: &TypedGraph, graph: TypedGraph) -> Result<Self, ConditionError> {
        Self::exists(anchor, graph, Condition::True)
    }

    /// `∄a = ¬∃(a, true)`.
    pub fn not_exists(anchor: &TypedGraph, graph: TypedGraph) -> Result<Self, ConditionError> {
        Ok(Self::exists(anchor, graph, Condition::True)?.negate())
    }

    /// `∀(a, sub) = ¬∃(a, ¬sub)`.
    pub fn forall(anchor: &TypedGraph, graph: TypedGraph, sub: Condition) -> Result<Self, ConditionError> {
        Ok(Self::exists(anchor, graph, sub.negate())?.negate())
    }

    pub fn falsity() -> Self {
        Condition::Not(Box::new(Condition::True))
    }

    pub fn negate(self) -> Self {
        match self {
            Condition::Not(inner) => *inner,
            other => Condition::Not(Box::new(other)),
        }
    }

    /// `self ⟹ other`, as `¬self ∨ other`.
    pub fn implies(self, other: Condition) -> Self {
        Condition::Or(vec![self.negate(), other])
    }

    pub fn and(parts: impl IntoIterator<Item = Condition>) -> Self {
        Condition::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Condition>) -> Self {
        Condition::Or(parts.into_iter().collect())
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Condition::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Condition::Not(c) if c.is_true())
    }

    /// Checks that every `∃` node is anchored consistently, starting from
    /// `anchor`.
    pub fn validate(&self, anchor: &TypedGraph) -> Result<(), ConditionError> {
        match self {
            Condition::True => Ok(()),
            Condition::Not(c) => c.validate(anchor),
            Condition::And(cs) | Condition::Or(cs) => cs.iter().try_for_each(|c| c.validate(anchor)),
            Condition::Exists(e) => {
                match anchor.inclusion_into(&e.graph) {
                    Some(m) if m == e.from_anchor && anchor.size() < e.graph.size() => {}
                    _ => {
                        return Err(ConditionError::AnchorMismatch {
                            expected: format!("{:?}", e.anchor()),
                            found: format!("{anchor:?}"),
                        })
                    }
                }
                e.sub.validate(&e.graph)
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Condition::True => 1,
            Condition::Not(c) => 1 + c.size(),
            Condition::And(cs) | Condition::Or(cs) => 1 + cs.iter().map(Condition::size).sum::<usize>(),
            Condition::Exists(e) => 1 + e.sub.size(),
        }
    }

    /// Nesting depth of quantifiers.
    pub fn depth(&self) -> usize {
        match self {
            Condition::True => 0,
            Condition::Not(c) => c.depth(),
            Condition::And(cs) | Condition::Or(cs) => cs.iter().map(Condition::depth).max().unwrap_or(0),
            Condition::Exists(e) => 1 + e.sub.depth(),
        }
    }

    pub(crate) fn exists_unchecked(graph: TypedGraph, from_anchor: Morphism, sub: Condition) -> Self {
        Condition::Exists(Box::new(Exists {
            graph,
            from_anchor,
            sub,
        }))
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::True => write!(f, "true"),
            c if c.is_false() => write!(f, "false"),
            Condition::Not(inner) => match &**inner {
                Condition::Exists(e) if e.sub.is_true() => write!(f, "∄{:?}", e.graph),
                Condition::Exists(e) if matches!(e.sub, Condition::Not(_)) => {
                    let Condition::Not(s) = &e.sub else { unreachable!() };
                    write!(f, "∀({:?}, {})", e.graph, s)
                }
                other => write!(f, "¬{other}"),
            },
            Condition::Exists(e) if e.sub.is_true() => write!(f, "∃{:?}", e.graph),
            Condition::Exists(e) => write!(f, "∃({:?}, {})", e.graph, e.sub),
            Condition::And(cs) | Condition::Or(cs) if cs.is_empty() => {
                write!(
                    f,
                    "{}",
                    if matches!(self, Condition::And(_)) {
                        "true"
                    } else {
                        "false"
                    }
                )
            }
            Condition::And(cs) => join(f, cs, " ∧ "),
            Condition::Or(cs) => join(f, cs, " ∨ "),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, cs: &[Condition], sep: &str) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn pl() -> TypedGraph {
        TypedGraph::builder().node("p", "Pl").build().unwrap()
    }

    pub fn pl_tk() -> TypedGraph {
        TypedGraph::builder().node("p", "Pl").node("t", "Tk").build().unwrap()
    }

    pub fn pl_tok_tk() -> TypedGraph {
        TypedGraph::builder()
            .node("p", "Pl")
            .node("t", "Tk")
            .edge("e", "tok", "p", "t")
            .build()
            .unwrap()
    }

    /// Two places containing the same token.
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

    pub fn parallel_tok(n: usize) -> TypedGraph {
        let mut b = TypedGraph::builder().node("p", "Pl").node("t", "Tk");
        for i in 0..n {
            b = b.edge(format!("e{i}"), "tok", "p", "t");
        }
        b.build().unwrap()
    }

    /// `∀(Pl, ∃ Pl -tok-> Tk)`.
    pub fn every_place_has_token() -> Condition {
        let inner = Condition::exists_plain(&pl(), pl_tok_tk()).unwrap();
        Condition::forall(&TypedGraph::empty(), pl(), inner).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::{fixtures::*, *};

    #[test]
    fn real_inclusion_is_enforced() {
        let g = pl();
        assert!(matches!(
            Condition::exists(&g, g.clone(), Condition::True),
            Err(ConditionError::NotReal(_))
        ));
        assert!(matches!(
            Condition::exists(&pl_tk(), pl(), Condition::True),
            Err(ConditionError::NotSubgraph(_))
        ));
    }

    #[test]
    fn validate_checks_nested_anchors() {
        let d = every_place_has_token();
        assert_eq!(d.validate(&TypedGraph::empty()), Ok(()));
        assert!(d.validate(&pl()).is_err());
    }

    #[test]
    fn display_uses_derived_forms() {
        let d = every_place_has_token();
        assert!(d.to_string().starts_with("∀("));
        let n = Condition::not_exists(&TypedGraph::empty(), pl()).unwrap();
        assert!(n.to_string().starts_with("∄"));
        assert_eq!(Condition::falsity().to_string(), "false");
    }
}

//! EMF model graphs: the four structural constraints, their first-order
//! variants bounded by cycle length `k`, and model repair and completion.

use std::fmt;

use crate::{
    condition::{classify, Condition},
    graph::{containment_pairs, validate_type_graph, IsoSet, TypeGraph, TypeViolation, TypedGraph},
    id::Id,
    program::{execute, ExecError, ExecOptions, LocatedGraph},
    repair::{
        compose_conjunction, synthesize_legit, RepairError, RepairPlan, SeqKind, Sequentialization, SynthesisOptions,
    },
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaTag {
    OneContainer,
    NoCycle,
    NoParallel,
    AllOpposites,
}

impl fmt::Display for SchemaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaTag::OneContainer => "one-container",
            SchemaTag::NoCycle => "no-cycle",
            SchemaTag::NoParallel => "no-parallel",
            SchemaTag::AllOpposites => "all-opposites",
        })
    }
}

#[derive(Debug, Clone)]
pub struct EmfInstance {
    pub tag: SchemaTag,
    pub label: String,
    pub condition: Condition,
}

#[derive(Debug, Clone)]
pub struct EmfkConstraintSet {
    pub k: usize,
    pub instances: Vec<EmfInstance>,
}

impl EmfkConstraintSet {
    pub fn conditions(&self) -> Vec<Condition> {
        self.instances.iter().map(|i| i.condition.clone()).collect()
    }

    pub fn conjunction(&self) -> Condition {
        Condition::and(self.conditions())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmfError {
    #[error("invalid type graph: {0:?}")]
    TypeGraph(Vec<TypeViolation>),
    #[error("k must be positive")]
    ZeroK,
    #[error("instance {index} ({condition}): {reason}")]
    Precondition {
        index: usize,
        condition: String,
        reason: &'static str,
    },
    #[error(transparent)]
    Repair(#[from] RepairError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("the completion program has no result")]
    NoResult,
}

/// Instances of the four schemas over `tg`, tag by tag, each tag in
/// type-graph declaration order. Cycles are only instantiated along
/// containment paths that exist at type level.
pub fn generate_emfk(tg: &TypeGraph, k: usize) -> Result<EmfkConstraintSet, EmfError> {
    validate_type_graph(tg).map_err(EmfError::TypeGraph)?;
    if k == 0 {
        return Err(EmfError::ZeroK);
    }
    let mut instances = Vec::new();
    let mut push = |tag, label: String, graphs: Vec<TypedGraph>| {
        let mut seen = IsoSet::new();
        for g in graphs {
            if seen.insert(g.clone()) {
                let condition = Condition::not_exists(&TypedGraph::empty(), g).expect("nonempty pattern");
                instances.push(EmfInstance {
                    tag,
                    label: label.clone(),
                    condition,
                });
            }
        }
    };

    let containment: Vec<_> = tg.edges.iter().filter(|e| tg.is_containment(e.id.as_str())).collect();
    for (i, c1) in containment.iter().enumerate() {
        for c2 in &containment[i..] {
            if c1.tgt == c2.tgt {
                push(
                    SchemaTag::OneContainer,
                    format!("{}/{}", c1.id, c2.id),
                    two_edges_into(&c1.id, &c1.src, &c2.id, &c2.src, &c1.tgt),
                );
            }
        }
    }

    for len in 1..=k {
        let cycles = containment_cycles(tg, len);
        if !cycles.is_empty() {
            push(SchemaTag::NoCycle, format!("length {len}"), cycles);
        }
    }

    for t in &tg.edges {
        push(
            SchemaTag::NoParallel,
            t.id.to_string(),
            two_edges_into(&t.id, &t.src, &t.id, &t.src, &t.tgt)
                .into_iter()
                .filter(is_parallel)
                .collect(),
        );
    }

    for (e1, e2) in &tg.opposites {
        let t1 = tg.edge_type(e1.as_str()).expect("validated");
        let mut shapes = vec![(Id::new("x"), Id::new("y"))];
        if t1.src == t1.tgt {
            shapes.push((Id::new("x"), Id::new("x")));
        }
        for (x, y) in shapes {
            let mut b = TypedGraph::builder().node(x.clone(), t1.src.clone());
            if x != y {
                b = b.node(y.clone(), t1.tgt.clone());
            }
            let a = b
                .clone()
                .edge("e1", e1.clone(), x.clone(), y.clone())
                .build()
                .expect("typed");
            let c = b
                .edge("e1", e1.clone(), x.clone(), y.clone())
                .edge("e2", e2.clone(), y, x)
                .build()
                .expect("typed");
            let condition = Condition::forall(
                &TypedGraph::empty(),
                a.clone(),
                Condition::exists_plain(&a, c).expect("real"),
            )
            .expect("nonempty");
            instances.push(EmfInstance {
                tag: SchemaTag::AllOpposites,
                label: format!("{e1}/{e2}"),
                condition,
            });
        }
    }
    Ok(EmfkConstraintSet { k, instances })
}

/// `x -t1-> z <-t2- y` and all type-consistent identifications of its
/// nodes.
fn two_edges_into(t1: &Id, s1: &Id, t2: &Id, s2: &Id, target: &Id) -> Vec<TypedGraph> {
    let mut out = Vec::new();
    // (x = y, x = z, y = z)
    for (xy, xz, yz) in [
        (false, false, false),
        (true, false, false),
        (false, true, false),
        (false, false, true),
        (true, true, true),
    ] {
        if (xy && s1 != s2) || (xz && s1 != target) || (yz && s2 != target) {
            continue;
        }
        let x = if xz { "z" } else { "x" };
        let y = if yz {
            "z"
        } else if xy {
            x
        } else {
            "y"
        };
        let mut b = TypedGraph::builder().node("z", target.clone());
        if x == "x" {
            b = b.node("x", s1.clone());
        }
        if y == "y" {
            b = b.node("y", s2.clone());
        }
        out.push(
            b.edge("e1", t1.clone(), x, "z")
                .edge("e2", t2.clone(), y, "z")
                .build()
                .expect("typed"),
        );
    }
    out
}

fn is_parallel(g: &TypedGraph) -> bool {
    let (a, b) = (g.edge(0), g.edge(1));
    a.src == b.src && a.tgt == b.tgt
}

/// Containment cycles through `len` distinct nodes.
fn containment_cycles(tg: &TypeGraph, len: usize) -> Vec<TypedGraph> {
    let containment: Vec<_> = tg.edges.iter().filter(|e| tg.is_containment(e.id.as_str())).collect();
    let mut out = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    fn go(cs: &[&crate::graph::TypeEdge], len: usize, path: &mut Vec<usize>, out: &mut Vec<TypedGraph>) {
        if path.len() == len {
            let first = cs[path[0]];
            if cs[path[len - 1]].tgt != first.src {
                return;
            }
            let mut b = TypedGraph::builder();
            for (i, &e) in path.iter().enumerate() {
                b = b.node(format!("v{i}"), cs[e].src.clone());
            }
            for (i, &e) in path.iter().enumerate() {
                b = b.edge(
                    format!("c{i}"),
                    cs[e].id.clone(),
                    format!("v{i}"),
                    format!("v{}", (i + 1) % len),
                );
            }
            out.push(b.build().expect("typed"));
            return;
        }
        for (j, c) in cs.iter().enumerate() {
            if path.last().is_none_or(|&p| cs[p].tgt == c.src) {
                path.push(j);
                go(cs, len, path, out);
                path.pop();
            }
        }
    }
    go(&containment, len, &mut path, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmfViolation {
    TwoContainers { target: Id, edges: (Id, Id) },
    ContainmentCycle { node: Id },
    ParallelEdges { edges: (Id, Id) },
    MissingOpposite { edge: Id, opposite_type: Id },
}

impl EmfViolation {
    /// Number of the violated condition, 1 to 4.
    pub fn condition(&self) -> u8 {
        match self {
            EmfViolation::TwoContainers { .. } => 1,
            EmfViolation::ContainmentCycle { .. } => 2,
            EmfViolation::ParallelEdges { .. } => 3,
            EmfViolation::MissingOpposite { .. } => 4,
        }
    }
}

impl fmt::Display for EmfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmfViolation::TwoContainers { target, edges } => {
                write!(f, "`{target}` has two containers via `{}` and `{}`", edges.0, edges.1)
            }
            EmfViolation::ContainmentCycle { node } => write!(f, "`{node}` lies on a containment cycle"),
            EmfViolation::ParallelEdges { edges } => write!(f, "`{}` and `{}` are parallel", edges.0, edges.1),
            EmfViolation::MissingOpposite { edge, opposite_type } => {
                write!(f, "`{edge}` has no opposite `{opposite_type}` edge")
            }
        }
    }
}

/// Checks the four EMF conditions directly, with full acyclicity.
pub fn is_emf_model_graph(g: &TypedGraph, tg: &TypeGraph) -> Result<(), Vec<EmfViolation>> {
    let mut out = Vec::new();
    let edges = g.edges();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = (&edges[i], &edges[j]);
            if a.tgt == b.tgt && tg.is_containment(a.ty.as_str()) && tg.is_containment(b.ty.as_str()) {
                out.push(EmfViolation::TwoContainers {
                    target: g.node(a.tgt).id.clone(),
                    edges: (a.id.clone(), b.id.clone()),
                });
            }
        }
    }
    for (v, w) in containment_pairs(g, tg) {
        if v == w {
            out.push(EmfViolation::ContainmentCycle { node: v });
        }
    }
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = (&edges[i], &edges[j]);
            if a.src == b.src && a.tgt == b.tgt && a.ty == b.ty {
                out.push(EmfViolation::ParallelEdges {
                    edges: (a.id.clone(), b.id.clone()),
                });
            }
        }
    }
    for (t1, t2) in &tg.opposites {
        for e in edges.iter().filter(|e| &e.ty == t1) {
            let found = edges.iter().any(|o| &o.ty == t2 && o.src == e.tgt && o.tgt == e.src);
            if !found {
                out.push(EmfViolation::MissingOpposite {
                    edge: e.id.clone(),
                    opposite_type: t2.clone(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Repair program turning graphs satisfying `emfk1` into graphs satisfying
/// `emfk1 ∧ emfk2`: negative instances first, then the universal ones made
/// to preserve the negatives.
pub fn emfk_repair_program(emfk1: &[Condition], emfk2: &[Condition]) -> Result<RepairPlan, EmfError> {
    for (index, c) in emfk1.iter().enumerate() {
        if !classify(c).negative {
            return Err(EmfError::Precondition {
                index,
                condition: c.to_string(),
                reason: "emfk1 instances must be negative",
            });
        }
    }
    for (index, c) in emfk2.iter().enumerate() {
        let class = classify(c);
        if !(class.negative || class.universal) {
            return Err(EmfError::Precondition {
                index,
                condition: c.to_string(),
                reason: "emfk2 instances must be negative or universal",
            });
        }
    }
    let mut all: Vec<Condition> = Vec::new();
    for c in emfk1.iter().chain(emfk2) {
        if !all.contains(c) {
            all.push(c.clone());
        }
    }
    let (negatives, universals): (Vec<_>, Vec<_>) = all.into_iter().partition(|c| classify(c).negative);
    let opts = SynthesisOptions::default();
    let items = negatives
        .iter()
        .chain(&universals)
        .map(|c| Ok((c.clone(), synthesize_legit(c, &opts)?)))
        .collect::<Result<Vec<_>, RepairError>>()?;
    let kind = if universals.is_empty() {
        SeqKind::Negative
    } else {
        SeqKind::MixedCase3
    };
    let seq = Sequentialization {
        items,
        kind,
        split: negatives.len(),
        evidence: "instances of one schema".into(),
    };
    if seq.items.is_empty() {
        return Ok(synthesize_legit(&Condition::True, &opts)?);
    }
    Ok(compose_conjunction(&seq)?)
}

/// The completion program for all EMFk instances over `tg`.
pub fn completion_plan(tg: &TypeGraph, k: usize) -> Result<RepairPlan, EmfError> {
    let set = generate_emfk(tg, k)?;
    emfk_repair_program(&[], &set.conditions())
}

/// Whether no rule of the plan creates or deletes nodes.
pub fn node_count_invariant_check(plan: &RepairPlan) -> bool {
    plan.program.rules().iter().all(|r| !r.changes_nodes())
}

/// Completes `g` to an EMF model graph, with `k = max(1, |V_g|)`.
pub fn emf_complete(g: &TypedGraph, tg: &TypeGraph, opts: &ExecOptions) -> Result<TypedGraph, EmfError> {
    let plan = completion_plan(tg, g.node_count().max(1))?;
    complete_with(&plan, g, opts)
}

/// Runs a completion plan built for some `k ≥ |V_g|`.
pub fn complete_with(plan: &RepairPlan, g: &TypedGraph, opts: &ExecOptions) -> Result<TypedGraph, EmfError> {
    let out = execute(&plan.program, LocatedGraph::unmarked(g.clone()), opts)?.ok_or(EmfError::NoResult)?;
    Ok(out.result.graph)
}

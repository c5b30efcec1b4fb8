use std::collections::BTreeSet;

use crate::{
    condition::{classify, cpres, satisfies_constraint, simplify, Condition, Quant, Quantified},
    graph::{all_typed_graphs, GraphBound, PartialMorphism, TypeGraph, TypedGraph},
    id::Id,
    program::{LocatedGraph, Program, Rule},
    repair::{proper::one_of, repairing_set_absence_at, RepairError, RepairPlan, TraceEntry},
};

/// `P^d`: every rule `ρ` of the plan gets the extra conjunct `cpres(ρ, d)`.
///
/// Identity rules are left alone, and conjuncts of `d` the rule provably
/// cannot break are left out of `cpres`: negative conjuncts whose graphs
/// use none of the types the rule creates. This only weakens the premise
/// `Shift(L, d)`, so the guarded rule is at least as restrictive.
pub fn make_preserving(plan: &RepairPlan, d: &Condition) -> Result<RepairPlan, RepairError> {
    d.validate(&TypedGraph::empty())?;
    let conjuncts = match simplify(d) {
        Condition::And(cs) => cs,
        Condition::True => Vec::new(),
        other => vec![other],
    };
    let mut failure = None;
    let program = plan.program.map_rules(&mut |r: &Rule| {
        if r.is_identity() || failure.is_some() {
            return r.clone();
        }
        let created = created_types(r);
        let relevant: Vec<Condition> = conjuncts
            .iter()
            .filter(|c| !(classify(c).negative && disjoint(&types_of(c), &created)))
            .cloned()
            .collect();
        if relevant.is_empty() {
            return r.clone();
        }
        let p = r.plain_rule();
        let extra = cpres(p.lhs(), p.interface(), p.rhs(), &Condition::and(relevant));
        match r.clone().and_ac(extra) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                r.clone()
            }
        }
    });
    if let Some(e) = failure {
        return Err(e.into());
    }
    let mut out = plan.clone();
    out.program = program;
    out.provenance.push(TraceEntry {
        depth: 0,
        case: "preserving".into(),
        detail: format!("rules guarded by cpres(ρ, {d})"),
    });
    out.refresh_monotonicity();
    Ok(out)
}

/// `P′^{e1} = ⟨P^{e1}; ⟨select(a, ¬c); S_a^id′⟩↓⟩` for a plan repairing the
/// universal constraint `∀(a, c)`: occurrences the guarded program leaves
/// unrepaired are deleted.
pub fn make_preserving_universal(plan: &RepairPlan, e1: &Condition) -> Result<RepairPlan, RepairError> {
    let d = simplify(&plan.condition);
    let q = Quantified::of(&d)
        .filter(|q| q.quant == Quant::Forall && classify(&d).universal)
        .ok_or_else(|| RepairError::NotUniversal(d.to_string()))?;
    let negative = match simplify(e1) {
        Condition::True => true,
        Condition::And(cs) => cs.iter().all(|c| classify(c).negative),
        c => classify(&c).negative,
    };
    if !negative {
        return Err(RepairError::NotNegative(e1.to_string()));
    }
    let guarded = make_preserving(plan, e1)?;
    let (a, c) = (plan.anchor.clone(), q.exists.graph().clone());
    let deleters = repairing_set_absence_at(&a, &c)?
        .into_iter()
        .map(|r| r.with_spo(true))
        .collect();
    let select = Rule::select(&a, &c, q.exists.sub().clone())?;
    let fallback = Program::alap(Program::seq([Program::rule(select), one_of(deleters)]));
    let mut out = guarded;
    out.program = Program::seq([out.program, fallback]);
    out.provenance.push(TraceEntry {
        depth: 0,
        case: "fallback".into(),
        detail: format!("delete remaining violations of {d}"),
    });
    out.refresh_monotonicity();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preservation {
    /// No counterexample among the enumerated graphs.
    Preserved { graphs_checked: usize },
    Counterexample {
        rule: String,
        before: Box<TypedGraph>,
        after: Box<TypedGraph>,
    },
}

impl Preservation {
    pub fn is_preserved(&self) -> bool {
        matches!(self, Preservation::Preserved { .. })
    }
}

/// Applies every rule of `program` at every match, ignoring markings, to
/// every graph within `bound` that satisfies `d`, smallest graphs first.
/// Reports the first result violating `d`.
pub fn check_preserving_bounded(
    program: &Program,
    d: &Condition,
    tg: &TypeGraph,
    bound: GraphBound,
    limit: usize,
) -> Result<Preservation, RepairError> {
    let graphs = all_typed_graphs(tg, bound, limit).map_err(RepairError::Budget)?;
    let rules: Vec<_> = program.rules().into_iter().filter(|r| !r.is_identity()).collect();
    let mut checked = 0;
    for g in graphs {
        if !satisfies_constraint(&g, d) {
            continue;
        }
        checked += 1;
        for r in &rules {
            let x = r.left_interface();
            let lg = LocatedGraph::new(g.clone(), PartialMorphism::undefined(x.node_count(), x.edge_count()));
            for step in r.apply(&lg) {
                if !satisfies_constraint(&step.result.graph, d) {
                    return Ok(Preservation::Counterexample {
                        rule: r.name().to_string(),
                        before: Box::new(g),
                        after: Box::new(step.result.graph),
                    });
                }
            }
        }
    }
    Ok(Preservation::Preserved {
        graphs_checked: checked,
    })
}

fn created_types(r: &Rule) -> BTreeSet<Id> {
    let (k, rhs) = (r.interface(), r.rhs());
    rhs.nodes()
        .iter()
        .filter(|n| k.node_index(n.id.as_str()).is_none())
        .map(|n| n.ty.clone())
        .chain(
            rhs.edges()
                .iter()
                .filter(|x| k.edge_index(x.id.as_str()).is_none())
                .map(|x| x.ty.clone()),
        )
        .collect()
}

fn types_of(c: &Condition) -> BTreeSet<Id> {
    let mut out = BTreeSet::new();
    collect_types(c, &mut out);
    out
}

fn collect_types(c: &Condition, out: &mut BTreeSet<Id>) {
    match c {
        Condition::True => {}
        Condition::Not(x) => collect_types(x, out),
        Condition::And(cs) | Condition::Or(cs) => cs.iter().for_each(|c| collect_types(c, out)),
        Condition::Exists(e) => {
            out.extend(e.graph().nodes().iter().map(|n| n.ty.clone()));
            out.extend(e.graph().edges().iter().map(|x| x.ty.clone()));
            collect_types(e.sub(), out);
        }
    }
}

fn disjoint(a: &BTreeSet<Id>, b: &BTreeSet<Id>) -> bool {
    a.intersection(b).next().is_none()
}

use std::collections::HashMap;

use crate::{
    condition::{classify, satisfies_constraint, simplify, Condition, ConditionClass, Quant, Quantified},
    graph::{all_typed_graphs, GraphBound, TypedGraph},
    program::{Program, Rule},
    repair::{
        check_preserving_bounded, make_preserving_universal,
        proper::{absence_program, exists_program, guarded},
        Guarantees, RepairError, RepairPlan, SynthesisOptions, TraceEntry,
    },
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    Negative,
    Positive,
    PreservingDeclared,
    PreservingChecked,
    /// Positive conditions followed by existential or universal ones.
    MixedCase2,
    /// Negative conditions followed by universal ones.
    MixedCase3,
}

#[derive(Debug, Clone)]
pub struct Sequentialization {
    pub items: Vec<(Condition, RepairPlan)>,
    pub kind: SeqKind,
    /// Number of leading items forming the first block in the mixed cases.
    pub split: usize,
    /// How the order of the second block was established.
    pub evidence: String,
}

/// Repair program for a legit constraint.
pub fn synthesize_legit(d: &Condition, opts: &SynthesisOptions) -> Result<RepairPlan, RepairError> {
    synthesize_at(d, &TypedGraph::empty(), opts)
}

pub(crate) fn synthesize_at(
    d: &Condition,
    anchor: &TypedGraph,
    opts: &SynthesisOptions,
) -> Result<RepairPlan, RepairError> {
    d.validate(anchor)?;
    let mut s = Synth {
        opts,
        trace: Vec::new(),
        depth: 0,
    };
    let program = s.program(&simplify(d), anchor)?;
    Ok(plan_for(d, anchor, program, s.trace))
}

fn plan_for(d: &Condition, anchor: &TypedGraph, program: Program, provenance: Vec<TraceEntry>) -> RepairPlan {
    let mut classification = classify(d);
    if !classification.proper && Quantified::of(d).is_some() {
        classification.generalized_proper = true;
    }
    classification.legit = true;
    let (increasing, decreasing) = RepairPlan::monotonicity(&program);
    RepairPlan {
        condition: d.clone(),
        anchor: anchor.clone(),
        program,
        classification,
        provenance,
        guarantees: Guarantees {
            stable: true,
            terminating: true,
            increasing,
            decreasing,
        },
        maximally_preserving_unverified: classification.proper,
    }
}

struct Synth<'a> {
    opts: &'a SynthesisOptions,
    trace: Vec<TraceEntry>,
    depth: usize,
}

impl Synth<'_> {
    fn note(&mut self, case: &str, detail: String) {
        self.trace.push(TraceEntry {
            depth: self.depth,
            case: case.to_string(),
            detail,
        });
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> T {
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    /// `d` is simplified and anchored at `anchor`.
    fn program(&mut self, d: &Condition, anchor: &TypedGraph) -> Result<Program, RepairError> {
        if let Some(plan) = self.opts.registry.lookup(d, anchor) {
            self.note("registered", d.to_string());
            return Ok(plan.program.clone());
        }
        if d.is_true() {
            self.note("true", "Skip".into());
            return Ok(Program::Skip(anchor.clone()));
        }
        if let Some(q) = Quantified::of(d) {
            return self.quantified(d, &q, anchor);
        }
        match d {
            Condition::And(parts) => {
                if !anchor.is_empty() {
                    return self.nested_conjunction(d, parts, anchor);
                }
                self.note("conjunction", format!("{} conjuncts", parts.len()));
                let witness = bounded_model(d, self.opts, GraphBound::new(2, 2, 1));
                let sat = match witness {
                    Some(g) => format!("satisfiable, witness with {} nodes", g.node_count()),
                    None => "satisfiability assumed".into(),
                };
                self.nested(|s| s.note("precondition", sat));
                let seq = self.nested(|s| s.sequentialize(parts))?;
                let plan = compose_conjunction(&seq)?;
                self.trace.extend(plan.provenance.iter().map(|t| TraceEntry {
                    depth: t.depth + self.depth + 1,
                    ..t.clone()
                }));
                Ok(plan.program)
            }
            Condition::Or(parts) => {
                let mut programs = Vec::new();
                let mut reasons = Vec::new();
                self.note("disjunction", format!("{} disjuncts", parts.len()));
                for p in parts {
                    match self.nested(|s| s.program(p, anchor)) {
                        Ok(prog) => programs.push(prog),
                        Err(e) => reasons.push(e.to_string()),
                    }
                }
                if programs.is_empty() {
                    return Err(RepairError::NotLegit {
                        condition: d.to_string(),
                        reason: format!("no disjunct is legit: {}", reasons.join("; ")),
                    });
                }
                let body = if programs.len() == 1 {
                    programs.pop().expect("one")
                } else {
                    Program::Choice(programs)
                };
                guarded(d, anchor, body)
            }
            _ => Err(RepairError::NotLegit {
                condition: d.to_string(),
                reason: "negated conjunction".into(),
            }),
        }
    }

    fn quantified(&mut self, d: &Condition, q: &Quantified<'_>, anchor: &TypedGraph) -> Result<Program, RepairError> {
        let c = q.exists.graph();
        match q.quant {
            Quant::Exists if q.body.is_true() => {
                self.note("∃a", format!("try R_a for {c:?}"));
                exists_program(anchor, c)
            }
            Quant::Forall if q.exists.sub().is_true() => {
                self.note("∄a", format!("S_a′↓ for {c:?}"));
                absence_program(anchor, c)
            }
            Quant::Exists => {
                self.note("∃(a,c)", format!("{c:?}"));
                let first = exists_program(anchor, c)?;
                let body = self.nested(|s| s.program(&q.body, c))?;
                let select = Rule::select(anchor, c, Condition::True)?;
                let unselect = Rule::unselect(anchor, c)?;
                let p = Program::seq([first, Program::rule(select), body, Program::rule(unselect)]);
                guarded(d, anchor, p)
            }
            Quant::Forall => {
                self.note("∀(a,c)", format!("{c:?}"));
                let body = self.nested(|s| s.program(&q.body, c))?;
                let select = Rule::select(anchor, c, q.exists.sub().clone())?;
                let unselect = Rule::unselect(anchor, c)?;
                Ok(Program::alap(Program::seq([
                    Program::rule(select),
                    body,
                    Program::rule(unselect),
                ])))
            }
        }
    }

    /// Conjunctions below a quantifier: only the shapes that compose without
    /// any preservation argument.
    fn nested_conjunction(
        &mut self,
        d: &Condition,
        parts: &[Condition],
        anchor: &TypedGraph,
    ) -> Result<Program, RepairError> {
        let classes: Vec<ConditionClass> = parts.iter().map(classify).collect();
        if !(classes.iter().all(|c| c.negative) || classes.iter().all(|c| c.positive)) {
            return Err(RepairError::NoEstablishedSequentialization(d.to_string()));
        }
        self.note("conjunction", format!("{} basic conjuncts", parts.len()));
        let ps = parts
            .iter()
            .map(|p| self.nested(|s| s.program(p, anchor)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Program::Seq(ps))
    }

    fn sequentialize(&mut self, parts: &[Condition]) -> Result<Sequentialization, RepairError> {
        let plans = parts
            .iter()
            .map(|p| synthesize_at(p, &TypedGraph::empty(), self.opts))
            .collect::<Result<Vec<_>, _>>()?;
        order(parts, plans, self.opts)
    }
}

/// Finds an order of the conjuncts under which sequential composition
/// applies: syntactic shapes first, then the declared order, then a
/// bounded search over permutations.
pub fn find_sequentialization(ds: &[Condition], opts: &SynthesisOptions) -> Result<Sequentialization, RepairError> {
    let plans = ds
        .iter()
        .map(|d| synthesize_legit(d, opts))
        .collect::<Result<Vec<_>, _>>()?;
    order(ds, plans, opts)
}

fn order(ds: &[Condition], plans: Vec<RepairPlan>, opts: &SynthesisOptions) -> Result<Sequentialization, RepairError> {
    let classes: Vec<ConditionClass> = ds.iter().map(|d| classify(&simplify(d))).collect();
    let items: Vec<(Condition, RepairPlan)> = ds.iter().cloned().zip(plans).collect();
    let build = |idx: Vec<usize>, kind, split, evidence: String| Sequentialization {
        items: idx.iter().map(|&i| items[i].clone()).collect(),
        kind,
        split,
        evidence,
    };
    let all: Vec<usize> = (0..ds.len()).collect();

    if ds.len() <= 1 || classes.iter().all(|c| c.negative) {
        return Ok(build(all, SeqKind::Negative, ds.len(), "syntactic".into()));
    }
    if classes.iter().all(|c| c.positive) {
        return Ok(build(all, SeqKind::Positive, ds.len(), "syntactic".into()));
    }

    let mixed = |first: &dyn Fn(&ConditionClass) -> bool, second: &dyn Fn(&ConditionClass) -> bool| {
        let head: Vec<usize> = all.iter().copied().filter(|&i| first(&classes[i])).collect();
        let tail: Vec<usize> = all.iter().copied().filter(|&i| !first(&classes[i])).collect();
        if head.is_empty() || !tail.iter().all(|&i| second(&classes[i])) {
            return None;
        }
        let (tail, evidence) = preserving_order(&tail, &items, opts)?;
        Some((head, tail, evidence))
    };

    if let Some((head, tail, evidence)) = mixed(&|c| c.negative, &|c| c.universal) {
        let split = head.len();
        return Ok(build([head, tail].concat(), SeqKind::MixedCase3, split, evidence));
    }
    if let Some((head, tail, evidence)) = mixed(&|c| c.positive, &|c| c.existential || c.universal) {
        let split = head.len();
        return Ok(build([head, tail].concat(), SeqKind::MixedCase2, split, evidence));
    }
    if opts.declare_preserving {
        return Ok(build(all, SeqKind::PreservingDeclared, 0, "declared".into()));
    }
    if let Some((order, evidence)) = preserving_order(&all, &items, opts) {
        return Ok(build(order, SeqKind::PreservingChecked, 0, evidence));
    }
    let shown: Vec<String> = ds.iter().map(Condition::to_string).collect();
    Err(RepairError::NoEstablishedSequentialization(shown.join(" ∧ ")))
}

/// An order of `idx` in which every program preserves the conjunction of
/// the conditions before it.
fn preserving_order(
    idx: &[usize],
    items: &[(Condition, RepairPlan)],
    opts: &SynthesisOptions,
) -> Option<(Vec<usize>, String)> {
    if idx.len() <= 1 {
        return Some((idx.to_vec(), "single".into()));
    }
    if opts.declare_preserving {
        return Some((idx.to_vec(), "declared".into()));
    }
    let tg = opts.type_graph.as_ref()?;
    let mut candidates = idx.to_vec();
    candidates.sort_by_key(|&i| (items[i].0.size(), i));
    let mut memo: HashMap<(usize, Vec<usize>), bool> = HashMap::new();
    let mut preserves = |k: usize, before: &[usize]| -> bool {
        if before.is_empty() {
            return true;
        }
        let mut key = before.to_vec();
        key.sort_unstable();
        *memo.entry((k, key)).or_insert_with(|| {
            let d = Condition::and(before.iter().map(|&i| items[i].0.clone()));
            matches!(
                check_preserving_bounded(&items[k].1.program, &d, tg, opts.check_bound, opts.check_limit),
                Ok(p) if p.is_preserved()
            )
        })
    };
    let mut prefix = Vec::new();
    if extend(&candidates, &mut prefix, &mut preserves) {
        let b = opts.check_bound;
        Some((
            prefix,
            format!("bounded check up to {} nodes, {} edges", b.max_nodes, b.max_edges),
        ))
    } else {
        None
    }
}

fn extend(candidates: &[usize], prefix: &mut Vec<usize>, ok: &mut dyn FnMut(usize, &[usize]) -> bool) -> bool {
    if prefix.len() == candidates.len() {
        return true;
    }
    for &k in candidates {
        if prefix.contains(&k) || !ok(k, prefix) {
            continue;
        }
        prefix.push(k);
        if extend(candidates, prefix, ok) {
            return true;
        }
        prefix.pop();
    }
    false
}

/// Sequential composition along an established sequentialization. In the
/// negative-then-universal case the universal programs are made to
/// preserve the negative block and get a deleting fallback.
pub fn compose_conjunction(seq: &Sequentialization) -> Result<RepairPlan, RepairError> {
    let Some((first, _)) = seq.items.first() else {
        return Err(RepairError::NoPlans);
    };
    let d = Condition::and(seq.items.iter().map(|(c, _)| c.clone()));
    if seq.items.len() == 1 {
        let mut plan = seq.items[0].1.clone();
        plan.condition = first.clone();
        return Ok(plan);
    }
    let mut provenance = vec![TraceEntry {
        depth: 0,
        case: format!("{:?}", seq.kind),
        detail: format!("split {}, order by {}", seq.split, seq.evidence),
    }];
    let mut programs = Vec::new();
    let head: Vec<Condition> = seq.items[..seq.split].iter().map(|(c, _)| c.clone()).collect();
    let e1 = Condition::and(head);
    for (i, (_, plan)) in seq.items.iter().enumerate() {
        let plan = if seq.kind == SeqKind::MixedCase3 && i >= seq.split {
            make_preserving_universal(plan, &e1)?
        } else {
            plan.clone()
        };
        provenance.extend(plan.provenance.iter().map(|t| TraceEntry {
            depth: t.depth + 1,
            ..t.clone()
        }));
        programs.push(plan.program);
    }
    let mut plan = plan_for(&d, &TypedGraph::empty(), Program::Seq(programs), provenance);
    plan.maximally_preserving_unverified = false;
    Ok(plan)
}

/// Repair for `d₁ ∨ … ∨ dₙ` from plans for some of the disjuncts: a single
/// plan is returned as it is, several become a choice.
pub fn synthesize_disjunction(ds: &[Condition], plans: Vec<RepairPlan>) -> Result<RepairPlan, RepairError> {
    let d = Condition::or(ds.iter().cloned());
    let mut plans = plans;
    match plans.len() {
        0 => Err(RepairError::NoPlans),
        1 => {
            let mut plan = plans.pop().expect("one");
            plan.condition = d;
            plan.guarantees.stable = false;
            Ok(plan)
        }
        _ => {
            let anchor = plans[0].anchor.clone();
            let provenance = plans
                .iter()
                .flat_map(|p| {
                    p.provenance.iter().map(|t| TraceEntry {
                        depth: t.depth + 1,
                        ..t.clone()
                    })
                })
                .collect();
            let program = guarded(
                &d,
                &anchor,
                Program::Choice(plans.into_iter().map(|p| p.program).collect()),
            )?;
            Ok(plan_for(&d, &anchor, program, provenance))
        }
    }
}

/// A plan for `d` also repairs any `d′` with `d ⟹ d′`; the implication is
/// taken on trust.
pub fn accept_implied(plan: &RepairPlan, implied: &Condition) -> RepairPlan {
    let mut out = plan.clone();
    out.condition = implied.clone();
    out.classification = classify(implied);
    out.classification.legit = true;
    out.guarantees.stable = false;
    out.provenance.push(TraceEntry {
        depth: 0,
        case: "implication".into(),
        detail: format!("{} ⟹ {implied} (declared)", plan.condition),
    });
    out
}

/// Searches for a model of `d` within `bound`. `None` means inconclusive.
pub fn bounded_model(d: &Condition, opts: &SynthesisOptions, bound: GraphBound) -> Option<TypedGraph> {
    let tg = opts.type_graph.as_ref()?;
    all_typed_graphs(tg, bound, opts.check_limit)
        .ok()?
        .into_iter()
        .find(|g| satisfies_constraint(g, d))
}

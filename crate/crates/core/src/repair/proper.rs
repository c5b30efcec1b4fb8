use crate::{
    condition::{classify, Condition},
    graph::TypedGraph,
    program::{Program, Rule},
    repair::{
        repairing_set_absence, repairing_set_exists, synthesize_legit, RepairError, RepairPlan, SynthesisOptions,
    },
};

/// Repair program for a proper constraint.
pub fn synthesize_proper(d: &Condition) -> Result<RepairPlan, RepairError> {
    if !classify(d).proper {
        return Err(RepairError::NotProper(d.to_string()));
    }
    synthesize_legit(d, &SynthesisOptions::default())
}

pub(crate) fn one_of(rules: Vec<Rule>) -> Program {
    let mut ps: Vec<Program> = rules.into_iter().map(Program::rule).collect();
    if ps.len() == 1 {
        ps.pop().expect("one")
    } else {
        Program::Choice(ps)
    }
}

/// `try R_a`.
pub(crate) fn exists_program(a: &TypedGraph, c: &TypedGraph) -> Result<Program, RepairError> {
    Ok(Program::try_(one_of(repairing_set_exists(a, c)?)))
}

/// `S_a′↓`.
pub(crate) fn absence_program(a: &TypedGraph, c: &TypedGraph) -> Result<Program, RepairError> {
    let rules = repairing_set_absence(a, c)?
        .into_iter()
        .map(|r| r.with_spo(true))
        .collect();
    Ok(Program::alap(one_of(rules)))
}

/// `try ⟨select(id_A, ¬d); body⟩`: runs `body` only where `d` fails.
pub(crate) fn guarded(d: &Condition, anchor: &TypedGraph, body: Program) -> Result<Program, RepairError> {
    let check = Rule::select(anchor, anchor, d.clone().negate())?.with_name("violated");
    Ok(Program::try_(Program::seq([Program::rule(check), body])))
}

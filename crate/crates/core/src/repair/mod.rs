//! Synthesis of repair programs.
//!
//! [`synthesize_legit`] is the entry point. It recurses over the condition
//! and dispatches to the constructions for proper conditions, conjunctions
//! and disjunctions. Repair programs for constraints have the empty
//! interface; nested programs run at the interface given by the enclosing
//! quantifier.

mod basic;
mod compose;
mod preserve;
mod proper;

use std::fmt;

pub use basic::{repairing_set_absence, repairing_set_absence_at, repairing_set_exists};
pub use compose::{
    accept_implied, compose_conjunction, find_sequentialization, synthesize_disjunction, synthesize_legit, SeqKind,
    Sequentialization,
};
pub use preserve::{check_preserving_bounded, make_preserving, make_preserving_universal, Preservation};
pub use proper::synthesize_proper;

use crate::{
    condition::{equivalent, Condition, ConditionClass, ConditionError, LegitOracle},
    graph::{GraphBound, GraphError, TypeGraph, TypedGraph},
    program::{Program, ProgramError},
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error("condition is not proper: {0}")]
    NotProper(String),
    #[error("no repair program known for {condition}: {reason}")]
    NotLegit { condition: String, reason: String },
    #[error("no established sequentialization for {0}")]
    NoEstablishedSequentialization(String),
    #[error("expected a universal condition, got {0}")]
    NotUniversal(String),
    #[error("expected a conjunction of negative conditions, got {0}")]
    NotNegative(String),
    #[error("bounded check exceeded its budget after {0} graphs")]
    Budget(usize),
    #[error("no plans given")]
    NoPlans,
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guarantees {
    pub stable: bool,
    pub terminating: bool,
    /// Every rule that changes the graph only adds items.
    pub increasing: bool,
    /// Every rule that changes the graph only deletes items.
    pub decreasing: bool,
}

/// One step of the synthesis, for tracing where a sub-program came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub depth: usize,
    pub case: String,
    pub detail: String,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:indent$}{}: {}",
            "",
            self.case,
            self.detail,
            indent = 2 * self.depth
        )
    }
}

#[derive(Debug, Clone)]
pub struct RepairPlan {
    pub condition: Condition,
    /// Interface of the program; empty for constraints.
    pub anchor: TypedGraph,
    pub program: Program,
    pub classification: ConditionClass,
    pub provenance: Vec<TraceEntry>,
    pub guarantees: Guarantees,
    /// Maximal preservation is claimed for the proper construction but
    /// never checked.
    pub maximally_preserving_unverified: bool,
}

impl RepairPlan {
    pub(crate) fn monotonicity(program: &Program) -> (bool, bool) {
        let rules = program.rules();
        let changing = rules.iter().filter(|r| !r.is_identity());
        let increasing = changing.clone().all(|r| r.is_increasing());
        let decreasing = changing.clone().all(|r| r.is_decreasing());
        (increasing, decreasing)
    }

    pub(crate) fn refresh_monotonicity(&mut self) {
        let (inc, dec) = Self::monotonicity(&self.program);
        self.guarantees.increasing = inc;
        self.guarantees.decreasing = dec;
    }
}

/// Repair programs known in advance, looked up by anchor and equivalence
/// of the condition.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: Vec<RepairPlan>,
}

impl Registry {
    pub fn register(&mut self, plan: RepairPlan) {
        self.entries.push(plan);
    }

    pub fn lookup(&self, d: &Condition, anchor: &TypedGraph) -> Option<&RepairPlan> {
        self.entries
            .iter()
            .find(|p| &p.anchor == anchor && (&p.condition == d || equivalent(&p.condition, d)))
    }

    pub fn contains(&self, d: &Condition) -> bool {
        self.entries
            .iter()
            .any(|p| &p.condition == d || equivalent(&p.condition, d))
    }
}

/// Hints steering [`synthesize_legit`].
#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub registry: Registry,
    /// Enables bounded preservation checks and the satisfiability search.
    pub type_graph: Option<TypeGraph>,
    pub check_bound: GraphBound,
    /// Upper limit on graphs enumerated by one bounded check.
    pub check_limit: usize,
    /// Trust that conjuncts, in the given order, form a preserving sequence.
    pub declare_preserving: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            registry: Registry::default(),
            type_graph: None,
            check_bound: GraphBound::new(3, 4, 2),
            check_limit: 200_000,
            declare_preserving: false,
        }
    }
}

impl SynthesisOptions {
    pub fn with_type_graph(mut self, tg: TypeGraph) -> Self {
        self.type_graph = Some(tg);
        self
    }

    pub fn declared_preserving(mut self) -> Self {
        self.declare_preserving = true;
        self
    }
}

impl LegitOracle for SynthesisOptions {
    fn conjunction_preserving(&self, parts: &[Condition]) -> bool {
        find_sequentialization(parts, self).is_ok()
    }

    fn has_repair_program(&self, c: &Condition) -> bool {
        self.registry.contains(c)
    }
}

//! Rules with interfaces, direct transformations and graph programs.
//!
//! Interface morphisms are inclusions by ids: the left interface `X` of a
//! rule is a subgraph of `L`, the right interface `Y` a subgraph of `R`.
//! A program state is a [`LocatedGraph`], a host graph together with a
//! marking of the current interface.

mod exec;
mod rule;

use std::sync::Arc;

pub use exec::{execute, execute_all, AllResults, ExecError, ExecOptions, ExecStats, Outcome, DEFAULT_MAX_STEPS};
pub use rule::{PlainRule, Rule, Step};

use crate::graph::{PartialMorphism, TypedGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("{0} is not a subgraph of {1}")]
    NotSubgraph(String, String),
    #[error("interface mismatch in {context}: expected {expected}, found {found}")]
    InterfaceMismatch {
        context: String,
        expected: String,
        found: String,
    },
    #[error("{0} needs at least one operand")]
    Empty(&'static str),
    #[error(transparent)]
    Condition(#[from] crate::condition::ConditionError),
}

/// A graph `G` with a marking `g: X ⇀ G` of the interface `X`.
///
/// Markings are total after every rule step; [`Program::Alap`] may leave
/// items undefined when its body deletes part of the interface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocatedGraph {
    pub graph: TypedGraph,
    pub marking: PartialMorphism,
}

impl LocatedGraph {
    /// `G` with the empty interface.
    pub fn unmarked(graph: TypedGraph) -> Self {
        LocatedGraph {
            graph,
            marking: PartialMorphism::default(),
        }
    }

    pub fn new(graph: TypedGraph, marking: PartialMorphism) -> Self {
        LocatedGraph { graph, marking }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Rule(Arc<Rule>),
    Choice(Vec<Program>),
    Seq(Vec<Program>),
    Try(Box<Program>),
    Alap(Box<Program>),
    Skip(TypedGraph),
}

impl Program {
    pub fn rule(r: Rule) -> Self {
        Program::Rule(Arc::new(r))
    }

    pub fn seq(ps: impl IntoIterator<Item = Program>) -> Self {
        Program::Seq(ps.into_iter().collect())
    }

    pub fn choice(ps: impl IntoIterator<Item = Program>) -> Self {
        Program::Choice(ps.into_iter().collect())
    }

    pub fn try_(p: Program) -> Self {
        Program::Try(Box::new(p))
    }

    pub fn alap(p: Program) -> Self {
        Program::Alap(Box::new(p))
    }

    pub fn input_interface(&self) -> &TypedGraph {
        match self {
            Program::Rule(r) => r.left_interface(),
            Program::Choice(ps) | Program::Seq(ps) => ps[0].input_interface(),
            Program::Try(p) | Program::Alap(p) => p.input_interface(),
            Program::Skip(x) => x,
        }
    }

    pub fn output_interface(&self) -> &TypedGraph {
        match self {
            Program::Rule(r) => r.right_interface(),
            Program::Choice(ps) => ps[0].output_interface(),
            Program::Seq(ps) => ps[ps.len() - 1].output_interface(),
            Program::Try(p) | Program::Alap(p) => p.input_interface(),
            Program::Skip(x) => x,
        }
    }

    /// Checks that interfaces chain up.
    pub fn validate(&self) -> Result<(), ProgramError> {
        let mismatch = |context: &str, expected: &TypedGraph, found: &TypedGraph| {
            Err(ProgramError::InterfaceMismatch {
                context: context.to_string(),
                expected: format!("{expected:?}"),
                found: format!("{found:?}"),
            })
        };
        match self {
            Program::Rule(_) | Program::Skip(_) => Ok(()),
            Program::Choice(ps) => {
                let first = ps.first().ok_or(ProgramError::Empty("choice"))?;
                for p in ps {
                    p.validate()?;
                    if p.input_interface() != first.input_interface() {
                        return mismatch("choice", first.input_interface(), p.input_interface());
                    }
                    if p.output_interface() != first.output_interface() {
                        return mismatch("choice", first.output_interface(), p.output_interface());
                    }
                }
                Ok(())
            }
            Program::Seq(ps) => {
                if ps.is_empty() {
                    return Err(ProgramError::Empty("sequence"));
                }
                for p in ps {
                    p.validate()?;
                }
                for w in ps.windows(2) {
                    if w[0].output_interface() != w[1].input_interface() {
                        return mismatch("sequence", w[0].output_interface(), w[1].input_interface());
                    }
                }
                Ok(())
            }
            Program::Try(p) | Program::Alap(p) => {
                p.validate()?;
                if p.input_interface() != p.output_interface() {
                    let context = if matches!(self, Program::Try(_)) { "try" } else { "alap" };
                    return mismatch(context, p.input_interface(), p.output_interface());
                }
                Ok(())
            }
        }
    }

    /// All rules in program order.
    pub fn rules(&self) -> Vec<&Arc<Rule>> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules<'a>(&'a self, out: &mut Vec<&'a Arc<Rule>>) {
        match self {
            Program::Rule(r) => out.push(r),
            Program::Choice(ps) | Program::Seq(ps) => ps.iter().for_each(|p| p.collect_rules(out)),
            Program::Try(p) | Program::Alap(p) => p.collect_rules(out),
            Program::Skip(_) => {}
        }
    }

    /// Rebuilds the program with every rule replaced by `f(rule)`.
    pub fn map_rules(&self, f: &mut dyn FnMut(&Rule) -> Rule) -> Program {
        match self {
            Program::Rule(r) => Program::rule(f(r)),
            Program::Choice(ps) => Program::Choice(ps.iter().map(|p| p.map_rules(f)).collect()),
            Program::Seq(ps) => Program::Seq(ps.iter().map(|p| p.map_rules(f)).collect()),
            Program::Try(p) => Program::try_(p.map_rules(f)),
            Program::Alap(p) => Program::alap(p.map_rules(f)),
            Program::Skip(x) => Program::Skip(x.clone()),
        }
    }

    /// Number of program nodes.
    pub fn size(&self) -> usize {
        match self {
            Program::Rule(_) | Program::Skip(_) => 1,
            Program::Choice(ps) | Program::Seq(ps) => 1 + ps.iter().map(Program::size).sum::<usize>(),
            Program::Try(p) | Program::Alap(p) => 1 + p.size(),
        }
    }
}

impl std::fmt::Display for Program {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Program::Rule(r) => write!(f, "{}", r.name()),
            Program::Choice(ps) => {
                write!(f, "{{")?;
                for (i, p) in ps.iter().enumerate() {
                    write!(f, "{}{p}", if i > 0 { ", " } else { "" })?;
                }
                write!(f, "}}")
            }
            Program::Seq(ps) => {
                write!(f, "⟨")?;
                for (i, p) in ps.iter().enumerate() {
                    write!(f, "{}{p}", if i > 0 { "; " } else { "" })?;
                }
                write!(f, "⟩")
            }
            Program::Try(p) => write!(f, "try {p}"),
            Program::Alap(p) => write!(f, "{p}↓"),
            Program::Skip(_) => write!(f, "Skip"),
        }
    }
}

//! Command-line front end: file formats, rendering and the subcommands.

pub mod dot;
pub mod format;

use std::{
    fs,
    io::Write,
    path::{Path, PathBuf},
};

use clap::{Args, Parser, Subcommand};
use graph_mend_core::{
    condition::satisfies_constraint,
    emf::{self, complete_with, completion_plan, node_count_invariant_check, EmfViolation},
    graph::{are_isomorphic, validate_type_graph, validate_typed_graph, IsoSet},
    program::{execute, execute_all, ExecOptions, DEFAULT_MAX_STEPS},
    repair::synthesize_legit,
    Condition, LocatedGraph, Program, SynthesisOptions, TypeGraph, TypedGraph,
};
use serde::Serialize;

use crate::format::{anchor_of, graph_to_json, plan_to_file, to_json_string};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    /// The command ran but the answer is negative or no result exists.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "graph-mend",
    version,
    about = "Repair typed graphs against nested graph constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a type graph and optionally a graph typed over it, including
    /// the EMF model-graph conditions
    Validate {
        #[arg(long = "type-graph", short = 't')]
        type_graph: PathBuf,
        #[arg(long, short = 'g')]
        graph: Option<PathBuf>,
    },
    /// Exit 0 if the graph satisfies the constraint, 1 otherwise
    Check {
        #[arg(long = "type-graph", short = 't')]
        type_graph: PathBuf,
        #[arg(long, short = 'g')]
        graph: PathBuf,
        #[arg(long, short = 'c')]
        constraint: PathBuf,
    },
    /// Synthesize a repair program
    Synthesize {
        #[arg(long = "type-graph", short = 't')]
        type_graph: PathBuf,
        #[arg(long, short = 'c', conflicts_with = "emfk", required_unless_present = "emfk")]
        constraint: Option<PathBuf>,
        /// Build the completion program for the EMFk constraints instead
        #[arg(long)]
        emfk: Option<usize>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
        /// Include the synthesis trace in the program file and on stderr
        #[arg(long)]
        trace: bool,
        /// Accept the declared order of a conjunction without checking it
        #[arg(long = "declare-preserving")]
        declare_preserving: bool,
    },
    /// Apply a repair program, or one synthesized for a constraint
    Repair {
        #[arg(long = "type-graph", short = 't')]
        type_graph: PathBuf,
        #[arg(long, short = 'g')]
        graph: PathBuf,
        #[arg(
            long,
            short = 'p',
            conflicts_with = "constraint",
            required_unless_present = "constraint"
        )]
        program: Option<PathBuf>,
        #[arg(long, short = 'c')]
        constraint: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        /// Write every result up to isomorphism; `--out` names a directory
        #[arg(long)]
        all: bool,
    },
    /// Complete a graph to an EMF model graph
    Complete {
        #[arg(long = "type-graph", short = 't')]
        type_graph: PathBuf,
        #[arg(long, short = 'g')]
        graph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-steps", env = "GRAPH_MEND_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Write Graphviz instead of JSON
    #[arg(long)]
    pub dot: bool,
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn exec_options(&self) -> ExecOptions {
        ExecOptions {
            max_steps: self.max_steps,
            ..ExecOptions::with_seed(self.seed)
        }
    }
}

/// Runs one command; data goes to `stdout`, diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { type_graph, graph } => validate(&type_graph, graph.as_deref(), stdout),
        Command::Check {
            type_graph,
            graph,
            constraint,
        } => check(&type_graph, &graph, &constraint, stdout),
        Command::Synthesize {
            type_graph,
            constraint,
            emfk,
            out,
            trace,
            declare_preserving,
        } => synthesize(
            &type_graph,
            constraint.as_deref(),
            emfk,
            out.as_deref(),
            trace,
            declare_preserving,
            stdout,
            stderr,
        ),
        Command::Repair {
            type_graph,
            graph,
            program,
            constraint,
            run,
            all,
        } => repair(
            &type_graph,
            &graph,
            program.as_deref(),
            constraint.as_deref(),
            &run,
            all,
            stdout,
            stderr,
        ),
        Command::Complete { type_graph, graph, run } => complete(&type_graph, &graph, &run, stdout, stderr),
    }
}

#[derive(Debug, Serialize)]
struct Violation {
    kind: String,
    message: String,
}

#[derive(Debug, Serialize)]
struct EmfWitness {
    condition: u8,
    message: String,
    items: Vec<String>,
}

#[derive(Debug, Serialize)]
struct ValidationReport {
    ok: bool,
    type_graph: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    typing: Option<Vec<Violation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    emf: Option<Vec<EmfWitness>>,
}

fn witness(v: &EmfViolation) -> EmfWitness {
    let items = match v {
        EmfViolation::TwoContainers { target, edges } => {
            vec![target.to_string(), edges.0.to_string(), edges.1.to_string()]
        }
        EmfViolation::ContainmentCycle { node } => vec![node.to_string()],
        EmfViolation::ParallelEdges { edges } => vec![edges.0.to_string(), edges.1.to_string()],
        EmfViolation::MissingOpposite { edge, opposite_type } => vec![edge.to_string(), opposite_type.to_string()],
    };
    EmfWitness {
        condition: v.condition(),
        message: v.to_string(),
        items,
    }
}

fn validate(tg_path: &Path, graph: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let tg = format::read_type_graph(tg_path)?;
    let tg_violations: Vec<Violation> = validate_type_graph(&tg)
        .err()
        .unwrap_or_default()
        .iter()
        .map(|v| Violation {
            kind: v.kind().into(),
            message: v.to_string(),
        })
        .collect();
    let mut report = ValidationReport {
        ok: tg_violations.is_empty(),
        type_graph: tg_violations,
        typing: None,
        emf: None,
    };
    if let Some(path) = graph {
        let g = format::read_graph(path)?;
        let typing: Vec<Violation> = validate_typed_graph(&g, &tg)
            .err()
            .unwrap_or_default()
            .iter()
            .map(|v| Violation {
                kind: "typing".into(),
                message: v.to_string(),
            })
            .collect();
        if report.ok && typing.is_empty() {
            let emf: Vec<EmfWitness> = emf::is_emf_model_graph(&g, &tg)
                .err()
                .unwrap_or_default()
                .iter()
                .map(witness)
                .collect();
            report.ok = emf.is_empty();
            report.emf = Some(emf);
        } else {
            report.ok = false;
        }
        report.typing = Some(typing);
    }
    write_stdout(stdout, &to_json_string(&report))?;
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Failed("validation found violations".into()))
    }
}

fn load_type_graph(path: &Path) -> Result<TypeGraph, CliError> {
    let tg = format::read_type_graph(path)?;
    validate_type_graph(&tg).map_err(|vs| {
        CliError::Invalid(format!(
            "type graph: {}",
            vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        ))
    })?;
    Ok(tg)
}

fn check_typing(what: &str, g: &TypedGraph, tg: &TypeGraph) -> Result<(), CliError> {
    validate_typed_graph(g, tg).map_err(|vs| {
        CliError::Invalid(format!(
            "{what}: {}",
            vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        ))
    })
}

fn load_graph(path: &Path, tg: &TypeGraph) -> Result<TypedGraph, CliError> {
    let g = format::read_graph(path)?;
    check_typing(&path.display().to_string(), &g, tg)?;
    Ok(g)
}

fn condition_graphs<'a>(c: &'a Condition, out: &mut Vec<&'a TypedGraph>) {
    match c {
        Condition::True => {}
        Condition::Not(x) => condition_graphs(x, out),
        Condition::And(cs) | Condition::Or(cs) => cs.iter().for_each(|c| condition_graphs(c, out)),
        Condition::Exists(e) => {
            out.push(e.graph());
            condition_graphs(e.sub(), out);
        }
    }
}

/// Reads a condition and insists it is a constraint over `tg`.
fn load_constraint(path: &Path, tg: &TypeGraph) -> Result<Condition, CliError> {
    let d = format::read_condition(path)?;
    match anchor_of(&d) {
        Some(a) if a.is_empty() => {}
        _ => {
            return Err(CliError::Usage(format!(
                "{}: only constraints (conditions over the empty graph) are supported",
                path.display()
            )))
        }
    }
    let mut graphs = Vec::new();
    condition_graphs(&d, &mut graphs);
    for g in graphs {
        check_typing(&path.display().to_string(), g, tg)?;
    }
    Ok(d)
}

fn check(tg_path: &Path, graph: &Path, constraint: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let tg = load_type_graph(tg_path)?;
    let g = load_graph(graph, &tg)?;
    let d = load_constraint(constraint, &tg)?;
    let ok = satisfies_constraint(&g, &d);
    write_stdout(stdout, &to_json_string(&serde_json::json!({ "satisfied": ok })))?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("the graph violates the constraint".into()))
    }
}

fn synthesis_options(tg: &TypeGraph, declare_preserving: bool) -> SynthesisOptions {
    let opts = SynthesisOptions::default().with_type_graph(tg.clone());
    if declare_preserving {
        opts.declared_preserving()
    } else {
        opts
    }
}

#[allow(clippy::too_many_arguments)]
fn synthesize(
    tg_path: &Path,
    constraint: Option<&Path>,
    emfk: Option<usize>,
    out: Option<&Path>,
    trace: bool,
    declare_preserving: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let tg = load_type_graph(tg_path)?;
    let plan = match (constraint, emfk) {
        (Some(path), _) => {
            let d = load_constraint(path, &tg)?;
            synthesize_legit(&d, &synthesis_options(&tg, declare_preserving))
                .map_err(|e| CliError::Failed(e.to_string()))?
        }
        (None, Some(k)) => {
            let plan = completion_plan(&tg, k).map_err(|e| match e {
                emf::EmfError::ZeroK => CliError::Usage(e.to_string()),
                e => CliError::Failed(e.to_string()),
            })?;
            if !node_count_invariant_check(&plan) {
                let _ = writeln!(stderr, "warning: the completion program creates or deletes nodes");
            }
            plan
        }
        (None, None) => return Err(CliError::Usage("either --constraint or --emfk is required".into())),
    };
    if trace {
        for entry in &plan.provenance {
            let _ = writeln!(stderr, "{entry}");
        }
    }
    emit(out, stdout, &to_json_string(&plan_to_file(&plan, trace)))
}

fn load_program(
    tg: &TypeGraph,
    program: Option<&Path>,
    constraint: Option<&Path>,
) -> Result<(Program, Option<Condition>), CliError> {
    match (program, constraint) {
        (Some(path), _) => {
            let p = format::read_program(path)?;
            if !p.input_interface().is_empty() {
                return Err(CliError::Usage(format!(
                    "{}: the program expects a non-empty interface",
                    path.display()
                )));
            }
            Ok((p, None))
        }
        (None, Some(path)) => {
            let d = load_constraint(path, tg)?;
            let plan =
                synthesize_legit(&d, &synthesis_options(tg, false)).map_err(|e| CliError::Failed(e.to_string()))?;
            Ok((plan.program, Some(d)))
        }
        (None, None) => Err(CliError::Usage("either --program or --constraint is required".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn repair(
    tg_path: &Path,
    graph: &Path,
    program: Option<&Path>,
    constraint: Option<&Path>,
    run: &RunArgs,
    all: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let tg = load_type_graph(tg_path)?;
    let g = load_graph(graph, &tg)?;
    let (p, d) = load_program(&tg, program, constraint)?;
    let opts = run.exec_options();
    let input = LocatedGraph::unmarked(g.clone());
    if all {
        let res = execute_all(&p, input, &opts).map_err(|e| CliError::Failed(e.to_string()))?;
        if !res.complete {
            let _ = writeln!(
                stderr,
                "warning: exploration stopped at a bound; results may be incomplete"
            );
        }
        if res.results.is_empty() {
            return Err(CliError::Failed("the program has no result".into()));
        }
        let mut seen = IsoSet::new();
        let graphs: Vec<TypedGraph> = res
            .results
            .into_iter()
            .map(|(lg, _)| lg.graph)
            .filter(|h| seen.insert(h.clone()))
            .collect();
        let _ = writeln!(stderr, "{} result(s)", graphs.len());
        if let Some(d) = &d {
            report_unsatisfied(graphs.iter(), d, stderr);
        }
        return write_all(&graphs, &tg, run, stdout);
    }
    let outcome = execute(&p, input, &opts)
        .map_err(|e| CliError::Failed(e.to_string()))?
        .ok_or_else(|| CliError::Failed("the program has no result".into()))?;
    let h = outcome.result.graph;
    let _ = writeln!(
        stderr,
        "{} rule application(s), {} loop iteration(s){}",
        outcome.stats.rule_applications,
        outcome.stats.alap_iterations,
        if are_isomorphic(&g, &h) {
            ", graph unchanged"
        } else {
            ""
        }
    );
    if let Some(d) = &d {
        report_unsatisfied(std::iter::once(&h), d, stderr);
    }
    emit(run.out.as_deref(), stdout, &render(&h, &tg, run.dot))
}

fn report_unsatisfied<'a>(graphs: impl Iterator<Item = &'a TypedGraph>, d: &Condition, stderr: &mut dyn Write) {
    for (i, h) in graphs.enumerate() {
        if !satisfies_constraint(h, d) {
            let _ = writeln!(stderr, "warning: result {i} does not satisfy the constraint");
        }
    }
}

fn complete(
    tg_path: &Path,
    graph: &Path,
    run: &RunArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let tg = load_type_graph(tg_path)?;
    let g = load_graph(graph, &tg)?;
    let plan = completion_plan(&tg, g.node_count().max(1)).map_err(|e| CliError::Failed(e.to_string()))?;
    let node_preserving = node_count_invariant_check(&plan);
    let h = complete_with(&plan, &g, &run.exec_options()).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Err(vs) = emf::is_emf_model_graph(&h, &tg) {
        let _ = writeln!(stderr, "warning: result is not an EMF model graph");
        for v in vs {
            let _ = writeln!(stderr, "  {v}");
        }
        if !node_preserving {
            let _ = writeln!(
                stderr,
                "  (the completion program changes the node count; only EMFk is guaranteed)"
            );
        }
    }
    emit(run.out.as_deref(), stdout, &render(&h, &tg, run.dot))
}

fn render(g: &TypedGraph, tg: &TypeGraph, as_dot: bool) -> String {
    if as_dot {
        dot::graph_dot(g, tg)
    } else {
        to_json_string(&graph_to_json(g))
    }
}

fn write_all(graphs: &[TypedGraph], tg: &TypeGraph, run: &RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &run.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let ext = if run.dot { "dot" } else { "json" };
            for (i, h) in graphs.iter().enumerate() {
                let path = dir.join(format!("result-{i}.{ext}"));
                write_file(&path, &render(h, tg, run.dot))?;
            }
            Ok(())
        }
        None if run.dot => {
            let text: String = graphs.iter().map(|h| dot::graph_dot(h, tg)).collect();
            write_stdout(stdout, &text)
        }
        None => {
            let all: Vec<_> = graphs.iter().map(graph_to_json).collect();
            write_stdout(stdout, &to_json_string(&all))
        }
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => write_stdout(stdout, text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_stdout(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

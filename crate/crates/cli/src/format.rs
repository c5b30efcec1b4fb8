//! JSON file formats.
//!
//! Graphs refer to nodes by id; inclusions are given as a pair of graphs
//! whose ids determine the map.

use std::{fs, path::Path};

use graph_mend_core::{
    condition::Condition,
    program::{PlainRule, Rule},
    repair::RepairPlan,
    Program, TypeGraph, TypedGraph,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeGraphJson {
    pub nodes: Vec<IdJson>,
    pub edges: Vec<TypeEdgeJson>,
    #[serde(default)]
    pub opposites: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdJson {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEdgeJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub containment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionJson {
    pub domain: GraphJson,
    pub codomain: GraphJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionJson {
    #[default]
    True,
    Not {
        sub: Box<ConditionJson>,
    },
    And {
        operands: Vec<ConditionJson>,
    },
    Or {
        operands: Vec<ConditionJson>,
    },
    Exists {
        inclusion: InclusionJson,
        #[serde(default)]
        sub: Box<ConditionJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub name: String,
    pub lhs: GraphJson,
    pub interface: GraphJson,
    pub rhs: GraphJson,
    pub left_interface: GraphJson,
    pub right_interface: GraphJson,
    pub ac: ConditionJson,
    #[serde(default)]
    pub spo: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProgramJson {
    Rule(Box<RuleJson>),
    Choice { operands: Vec<ProgramJson> },
    Seq { operands: Vec<ProgramJson> },
    Try { body: Box<ProgramJson> },
    Alap { body: Box<ProgramJson> },
    Skip { interface: GraphJson },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuaranteesJson {
    pub stable: bool,
    pub terminating: bool,
    pub increasing: bool,
    pub decreasing: bool,
}

/// A program together with what it was synthesized for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantees: Option<GuaranteesJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    pub program: ProgramJson,
}

pub fn type_graph_to_json(tg: &TypeGraph) -> TypeGraphJson {
    let mut opposites: Vec<[String; 2]> = Vec::new();
    for (a, b) in &tg.opposites {
        let pair = [a.to_string(), b.to_string()];
        let swapped = [b.to_string(), a.to_string()];
        if !opposites.contains(&pair) && !opposites.contains(&swapped) {
            opposites.push(pair);
        }
    }
    TypeGraphJson {
        nodes: tg.nodes.iter().map(|n| IdJson { id: n.to_string() }).collect(),
        edges: tg
            .edges
            .iter()
            .map(|e| TypeEdgeJson {
                id: e.id.to_string(),
                src: e.src.to_string(),
                tgt: e.tgt.to_string(),
                containment: tg.is_containment(e.id.as_str()),
            })
            .collect(),
        opposites,
    }
}

pub fn type_graph_from_json(j: &TypeGraphJson) -> TypeGraph {
    let mut tg = TypeGraph::default();
    for n in &j.nodes {
        tg = tg.node(n.id.as_str());
    }
    for e in &j.edges {
        tg = if e.containment {
            tg.containment_edge(e.id.as_str(), e.src.as_str(), e.tgt.as_str())
        } else {
            tg.edge(e.id.as_str(), e.src.as_str(), e.tgt.as_str())
        };
    }
    for [a, b] in &j.opposites {
        tg.add_opposite(a.as_str(), b.as_str());
    }
    tg
}

pub fn graph_to_json(g: &TypedGraph) -> GraphJson {
    GraphJson {
        nodes: g
            .nodes()
            .iter()
            .map(|n| NodeJson {
                id: n.id.to_string(),
                ty: n.ty.to_string(),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                id: e.id.to_string(),
                ty: e.ty.to_string(),
                src: g.node(e.src).id.to_string(),
                tgt: g.node(e.tgt).id.to_string(),
            })
            .collect(),
    }
}

pub fn graph_from_json(j: &GraphJson) -> Result<TypedGraph, CliError> {
    let mut b = TypedGraph::builder();
    for n in &j.nodes {
        b.add_node(n.id.as_str().into(), n.ty.as_str().into());
    }
    for e in &j.edges {
        b.add_edge(
            e.id.as_str().into(),
            e.ty.as_str().into(),
            e.src.as_str().into(),
            e.tgt.as_str().into(),
        );
    }
    b.build().map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn condition_to_json(c: &Condition) -> ConditionJson {
    match c {
        Condition::True => ConditionJson::True,
        Condition::Not(x) => ConditionJson::Not {
            sub: Box::new(condition_to_json(x)),
        },
        Condition::And(cs) => ConditionJson::And {
            operands: cs.iter().map(condition_to_json).collect(),
        },
        Condition::Or(cs) => ConditionJson::Or {
            operands: cs.iter().map(condition_to_json).collect(),
        },
        Condition::Exists(e) => ConditionJson::Exists {
            inclusion: InclusionJson {
                domain: graph_to_json(&e.anchor()),
                codomain: graph_to_json(e.graph()),
            },
            sub: Box::new(condition_to_json(e.sub())),
        },
    }
}

pub fn condition_from_json(j: &ConditionJson) -> Result<Condition, CliError> {
    Ok(match j {
        ConditionJson::True => Condition::True,
        ConditionJson::Not { sub } => Condition::Not(Box::new(condition_from_json(sub)?)),
        ConditionJson::And { operands } => {
            Condition::And(operands.iter().map(condition_from_json).collect::<Result<_, _>>()?)
        }
        ConditionJson::Or { operands } => {
            Condition::Or(operands.iter().map(condition_from_json).collect::<Result<_, _>>()?)
        }
        ConditionJson::Exists { inclusion, sub } => {
            let domain = graph_from_json(&inclusion.domain)?;
            let codomain = graph_from_json(&inclusion.codomain)?;
            let sub = condition_from_json(sub)?;
            sub.validate(&codomain).map_err(|e| CliError::Invalid(e.to_string()))?;
            Condition::exists(&domain, codomain, sub).map_err(|e| CliError::Invalid(e.to_string()))?
        }
    })
}

/// The anchor of the outermost quantifiers, if they agree.
pub fn anchor_of(c: &Condition) -> Option<TypedGraph> {
    match c {
        Condition::True => Some(TypedGraph::empty()),
        Condition::Not(x) => anchor_of(x),
        Condition::And(cs) | Condition::Or(cs) => {
            let anchors: Vec<TypedGraph> = cs.iter().map(anchor_of).collect::<Option<_>>()?;
            let nonempty: Vec<&TypedGraph> = anchors.iter().filter(|a| !a.is_empty()).collect();
            match nonempty.first() {
                None => Some(TypedGraph::empty()),
                Some(a) if nonempty.iter().all(|b| b == a) => Some((*a).clone()),
                Some(_) => None,
            }
        }
        Condition::Exists(e) => Some(e.anchor()),
    }
}

pub fn program_to_json(p: &Program) -> ProgramJson {
    match p {
        Program::Rule(r) => ProgramJson::Rule(Box::new(RuleJson {
            name: r.name().to_string(),
            lhs: graph_to_json(r.lhs()),
            interface: graph_to_json(r.interface()),
            rhs: graph_to_json(r.rhs()),
            left_interface: graph_to_json(r.left_interface()),
            right_interface: graph_to_json(r.right_interface()),
            ac: condition_to_json(r.ac()),
            spo: r.is_spo(),
        })),
        Program::Choice(ps) => ProgramJson::Choice {
            operands: ps.iter().map(program_to_json).collect(),
        },
        Program::Seq(ps) => ProgramJson::Seq {
            operands: ps.iter().map(program_to_json).collect(),
        },
        Program::Try(p) => ProgramJson::Try {
            body: Box::new(program_to_json(p)),
        },
        Program::Alap(p) => ProgramJson::Alap {
            body: Box::new(program_to_json(p)),
        },
        Program::Skip(x) => ProgramJson::Skip {
            interface: graph_to_json(x),
        },
    }
}

pub fn program_from_json(j: &ProgramJson) -> Result<Program, CliError> {
    let invalid = |e: &dyn std::fmt::Display| CliError::Invalid(e.to_string());
    let p = match j {
        ProgramJson::Rule(r) => {
            let plain = PlainRule::new(
                graph_from_json(&r.lhs)?,
                graph_from_json(&r.interface)?,
                graph_from_json(&r.rhs)?,
            )
            .map_err(|e| invalid(&e))?;
            let rule = Rule::new(
                r.name.clone(),
                plain,
                graph_from_json(&r.left_interface)?,
                graph_from_json(&r.right_interface)?,
                condition_from_json(&r.ac)?,
            )
            .map_err(|e| invalid(&e))?;
            Program::rule(rule.with_spo(r.spo))
        }
        ProgramJson::Choice { operands } => {
            Program::Choice(operands.iter().map(program_from_json).collect::<Result<_, _>>()?)
        }
        ProgramJson::Seq { operands } => {
            Program::Seq(operands.iter().map(program_from_json).collect::<Result<_, _>>()?)
        }
        ProgramJson::Try { body } => Program::try_(program_from_json(body)?),
        ProgramJson::Alap { body } => Program::alap(program_from_json(body)?),
        ProgramJson::Skip { interface } => Program::Skip(graph_from_json(interface)?),
    };
    Ok(p)
}

pub fn plan_to_file(plan: &RepairPlan, trace: bool) -> ProgramFile {
    let g = plan.guarantees;
    ProgramFile {
        condition: Some(condition_to_json(&plan.condition)),
        guarantees: Some(GuaranteesJson {
            stable: g.stable,
            terminating: g.terminating,
            increasing: g.increasing,
            decreasing: g.decreasing,
        }),
        trace: if trace {
            plan.provenance.iter().map(ToString::to_string).collect()
        } else {
            Vec::new()
        },
        program: program_to_json(&plan.program),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_type_graph(path: &Path) -> Result<TypeGraph, CliError> {
    Ok(type_graph_from_json(&read_json(path)?))
}

pub fn read_graph(path: &Path) -> Result<TypedGraph, CliError> {
    graph_from_json(&read_json(path)?)
}

pub fn read_condition(path: &Path) -> Result<Condition, CliError> {
    condition_from_json(&read_json(path)?)
}

pub fn read_program(path: &Path) -> Result<Program, CliError> {
    let file: ProgramFile = read_json(path)?;
    let p = program_from_json(&file.program)?;
    p.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(p)
}

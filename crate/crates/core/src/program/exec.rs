use std::collections::VecDeque;

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{
    graph::{IsoSet, Morphism, PartialMorphism},
    program::{LocatedGraph, Program, ProgramError},
};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecOptions {
    pub seed: u64,
    /// Budget of program steps, backtracking included.
    pub max_steps: usize,
    /// Bound on distinct states kept by [`execute_all`].
    pub max_results: usize,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            seed: 0,
            max_steps: DEFAULT_MAX_STEPS,
            max_results: 1_000,
        }
    }
}

impl ExecOptions {
    pub fn with_seed(seed: u64) -> Self {
        ExecOptions {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecStats {
    pub steps: usize,
    /// Rule applications on the returned derivation.
    pub rule_applications: usize,
    /// Iterations of `Fix(P)` on the returned derivation, over all loops.
    pub alap_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: LocatedGraph,
    /// Partial map from the program's input interface to its output one.
    pub interface_map: PartialMorphism,
    pub stats: ExecStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("step budget of {max_steps} exhausted; last rules: {}", trace.join(", "))]
    StepBudget { max_steps: usize, trace: Vec<String> },
    #[error("marking covers {found:?} items but the program interface has {expected:?}")]
    MarkingMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error(transparent)]
    Program(#[from] ProgramError),
}

#[derive(Debug, Clone)]
struct State {
    lg: LocatedGraph,
    track: PartialMorphism,
    alap_iterations: usize,
    rule_applications: usize,
}

type Res = Result<Option<State>, ExecError>;

struct Exec {
    rng: ChaCha8Rng,
    steps: usize,
    max_steps: usize,
    recent: VecDeque<String>,
}

/// Runs one derivation of `prog` from `lg`.
///
/// Nondeterminism is resolved by a seeded generator, with backtracking when
/// a choice leads to no derivation. `Ok(None)` means that no derivation
/// exists. An iteration `P↓` ends as soon as `Fix(P)` has no result that
/// changes the located graph.
pub fn execute(prog: &Program, lg: LocatedGraph, opts: &ExecOptions) -> Result<Option<Outcome>, ExecError> {
    prog.validate()?;
    check_marking(prog, &lg)?;
    let mut ex = Exec {
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        steps: 0,
        max_steps: opts.max_steps,
        recent: VecDeque::new(),
    };
    let start = State {
        lg,
        track: PartialMorphism::identity(prog.input_interface()),
        alap_iterations: 0,
        rule_applications: 0,
    };
    let found = ex.run(prog, start, &mut |_, s| Ok(Some(s)))?;
    Ok(found.map(|s| Outcome {
        result: s.lg,
        interface_map: s.track,
        stats: ExecStats {
            steps: ex.steps,
            rule_applications: s.rule_applications,
            alap_iterations: s.alap_iterations,
        },
    }))
}

fn check_marking(prog: &Program, lg: &LocatedGraph) -> Result<(), ExecError> {
    let x = prog.input_interface();
    let expected = (x.node_count(), x.edge_count());
    let found = (lg.marking.nodes.len(), lg.marking.edges.len());
    if expected != found {
        return Err(ExecError::MarkingMismatch { expected, found });
    }
    Ok(())
}

/// `Fix`: the body's result marked through `h ∘ i`.
fn refix(lg: LocatedGraph, track: &PartialMorphism) -> LocatedGraph {
    let marking = track.then(&lg.marking);
    LocatedGraph::new(lg.graph, marking)
}

impl Exec {
    fn tick(&mut self) -> Result<(), ExecError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(ExecError::StepBudget {
                max_steps: self.max_steps,
                trace: self.recent.iter().cloned().collect(),
            });
        }
        Ok(())
    }

    fn run(&mut self, p: &Program, s: State, k: &mut dyn FnMut(&mut Exec, State) -> Res) -> Res {
        stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || self.step(p, s, k))
    }

    fn step(&mut self, p: &Program, s: State, k: &mut dyn FnMut(&mut Exec, State) -> Res) -> Res {
        self.tick()?;
        match p {
            Program::Skip(_) => k(self, s),
            Program::Rule(r) => {
                let mut steps = r.apply(&s.lg);
                steps.shuffle(&mut self.rng);
                if !steps.is_empty() {
                    if self.recent.len() == 16 {
                        self.recent.pop_front();
                    }
                    self.recent.push_back(r.name().to_string());
                }
                for st in steps {
                    let next = State {
                        lg: st.result,
                        track: s.track.then(&st.interface_map),
                        alap_iterations: s.alap_iterations,
                        rule_applications: s.rule_applications + 1,
                    };
                    if let Some(done) = k(self, next)? {
                        return Ok(Some(done));
                    }
                }
                Ok(None)
            }
            Program::Choice(ps) => {
                let mut order: Vec<usize> = (0..ps.len()).collect();
                order.shuffle(&mut self.rng);
                for i in order {
                    if let Some(done) = self.run(&ps[i], s.clone(), k)? {
                        return Ok(Some(done));
                    }
                }
                Ok(None)
            }
            Program::Seq(ps) => self.seq(ps, s, k),
            Program::Try(inner) => {
                let applicable = self.run(inner, s.clone(), &mut |_, r| Ok(Some(r)))?.is_some();
                if applicable {
                    self.run(inner, s, k)
                } else {
                    k(self, s)
                }
            }
            Program::Alap(body) => self.alap(body, s, k),
        }
    }

    fn seq(&mut self, ps: &[Program], s: State, k: &mut dyn FnMut(&mut Exec, State) -> Res) -> Res {
        match ps.split_first() {
            None => k(self, s),
            Some((p, rest)) => self.run(p, s, &mut |e, r| e.seq(rest, r, &mut *k)),
        }
    }

    fn alap(&mut self, body: &Program, s: State, k: &mut dyn FnMut(&mut Exec, State) -> Res) -> Res {
        let start = State {
            lg: s.lg.clone(),
            track: PartialMorphism::identity(body.input_interface()),
            alap_iterations: s.alap_iterations,
            rule_applications: s.rule_applications,
        };
        let mut progressed = false;
        let found = self.run(body, start, &mut |e, r| {
            let lg = refix(r.lg, &r.track);
            if lg == s.lg {
                return Ok(None);
            }
            progressed = true;
            let next = State {
                lg,
                track: s.track.clone(),
                alap_iterations: r.alap_iterations + 1,
                rule_applications: r.rule_applications,
            };
            e.alap(body, next, &mut *k)
        })?;
        match found {
            Some(done) => Ok(Some(done)),
            None if progressed => Ok(None),
            None => k(self, s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AllResults {
    /// Results up to isomorphism of located graphs, each with the partial
    /// interface map of its derivation.
    pub results: Vec<(LocatedGraph, PartialMorphism)>,
    /// False when a bound cut the exploration short.
    pub complete: bool,
    pub steps: usize,
}

/// Explores all derivations of `prog` from `lg`, keeping results up to
/// isomorphism.
pub fn execute_all(prog: &Program, lg: LocatedGraph, opts: &ExecOptions) -> Result<AllResults, ExecError> {
    prog.validate()?;
    check_marking(prog, &lg)?;
    let mut all = All {
        steps: 0,
        max_steps: opts.max_steps,
        max_results: opts.max_results,
        complete: true,
    };
    let track = PartialMorphism::identity(prog.input_interface());
    let results = all.run(prog, vec![(lg, track)]);
    Ok(AllResults {
        results,
        complete: all.complete,
        steps: all.steps,
    })
}

type Located = (LocatedGraph, PartialMorphism);

struct All {
    steps: usize,
    max_steps: usize,
    max_results: usize,
    complete: bool,
}

impl All {
    fn exhausted(&mut self) -> bool {
        if self.steps >= self.max_steps {
            self.complete = false;
            return true;
        }
        false
    }

    fn run(&mut self, p: &Program, states: Vec<Located>) -> Vec<Located> {
        stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || self.step(p, states))
    }

    fn step(&mut self, p: &Program, states: Vec<Located>) -> Vec<Located> {
        match p {
            Program::Skip(_) => states,
            Program::Rule(r) => {
                let mut out = Distinct::default();
                for (lg, track) in &states {
                    if self.exhausted() {
                        break;
                    }
                    self.steps += 1;
                    for st in r.apply(lg) {
                        out.insert(st.result, track.then(&st.interface_map));
                    }
                }
                out.items
            }
            Program::Choice(ps) => {
                let mut out = Distinct::default();
                for q in ps {
                    for (lg, t) in self.run(q, states.clone()) {
                        out.insert(lg, t);
                    }
                }
                out.items
            }
            Program::Seq(ps) => ps.iter().fold(states, |acc, q| self.run(q, acc)),
            Program::Try(inner) => {
                let mut out = Distinct::default();
                for s in states {
                    let rs = self.run(inner, vec![s.clone()]);
                    if rs.is_empty() {
                        out.insert(s.0, s.1);
                    } else {
                        rs.into_iter().for_each(|(lg, t)| {
                            out.insert(lg, t);
                        });
                    }
                }
                out.items
            }
            Program::Alap(body) => {
                let id = PartialMorphism::identity(body.input_interface());
                let mut seen = Distinct::default();
                let mut done = Distinct::default();
                let mut frontier: Vec<Located> = Vec::new();
                for (lg, t) in states {
                    if seen.insert(lg.clone(), t.clone()) {
                        frontier.push((lg, t));
                    }
                }
                while let Some((lg, t)) = frontier.pop() {
                    if self.exhausted() || seen.items.len() > self.max_results {
                        self.complete = false;
                        break;
                    }
                    let mut progressed = false;
                    for (r, rt) in self.run(body, vec![(lg.clone(), id.clone())]) {
                        let next = refix(r, &rt);
                        if next == lg {
                            continue;
                        }
                        progressed = true;
                        if seen.insert(next.clone(), t.clone()) {
                            frontier.push((next, t.clone()));
                        }
                    }
                    if !progressed {
                        done.insert(lg, t);
                    }
                }
                done.items
            }
        }
    }
}

/// Located graphs with tracks, up to isomorphism respecting the marking.
#[derive(Default)]
struct Distinct {
    items: Vec<Located>,
    classes: Vec<(Vec<bool>, Vec<bool>, PartialMorphism, IsoSet)>,
}

impl Distinct {
    fn insert(&mut self, lg: LocatedGraph, track: PartialMorphism) -> bool {
        let node_mask: Vec<bool> = lg.marking.nodes.iter().map(Option::is_some).collect();
        let edge_mask: Vec<bool> = lg.marking.edges.iter().map(Option::is_some).collect();
        let iface = Morphism {
            nodes: lg.marking.nodes.iter().flatten().copied().collect(),
            edges: lg.marking.edges.iter().flatten().copied().collect(),
        };
        let pos = self
            .classes
            .iter()
            .position(|(n, e, t, _)| *n == node_mask && *e == edge_mask && *t == track);
        let set = match pos {
            Some(i) => &mut self.classes[i].3,
            None => {
                self.classes.push((node_mask, edge_mask, track.clone(), IsoSet::new()));
                &mut self.classes.last_mut().expect("just pushed").3
            }
        };
        if set.insert_located(lg.graph.clone(), iface) {
            self.items.push((lg, track));
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        graph::TypedGraph,
        program::{PlainRule, Rule},
    };

    fn parallel(n: usize) -> TypedGraph {
        let mut b = TypedGraph::builder().node("p", "Pl").node("t", "Tk");
        for i in 0..n {
            b = b.edge(format!("e{i}"), "tok", "p", "t");
        }
        b.build().unwrap()
    }

    fn deleter() -> Program {
        let l = parallel(2);
        let k = parallel(1);
        Program::alap(Program::rule(Rule::plain(
            "del",
            PlainRule::new(l, k.clone(), k).unwrap(),
        )))
    }

    #[test]
    fn skip_is_identity() {
        let g = LocatedGraph::unmarked(parallel(2));
        let out = execute(&Program::Skip(TypedGraph::empty()), g.clone(), &ExecOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(out.result, g);
        let all = execute_all(&Program::Skip(TypedGraph::empty()), g, &ExecOptions::default()).unwrap();
        assert_eq!(all.results.len(), 1);
    }

    #[test]
    fn alap_deletes_down_to_one_edge() {
        let out = execute(&deleter(), LocatedGraph::unmarked(parallel(3)), &ExecOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(out.result.graph.edge_count(), 1);
        assert_eq!(out.stats.alap_iterations, 2);
        let all = execute_all(&deleter(), LocatedGraph::unmarked(parallel(3)), &ExecOptions::default()).unwrap();
        assert!(all.complete);
        assert_eq!(all.results.len(), 1);
        assert_eq!(all.results[0].0.graph.edge_count(), 1);
    }

    #[test]
    fn try_of_inapplicable_rule_is_identity() {
        let pl = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let del = Rule::plain(
            "delPl",
            PlainRule::new(pl, TypedGraph::empty(), TypedGraph::empty()).unwrap(),
        );
        let g = LocatedGraph::unmarked(parallel(1));
        let p = Program::try_(Program::rule(del.clone()));
        assert_eq!(
            execute(&p, g.clone(), &ExecOptions::default()).unwrap().unwrap().result,
            g
        );
        assert!(execute(&Program::rule(del), g, &ExecOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn choice_of_two_rules_gives_two_results() {
        let e = TypedGraph::empty();
        let pl = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let tk = TypedGraph::builder().node("t", "Tk").build().unwrap();
        let add = |g: &TypedGraph| {
            Program::rule(Rule::plain(
                "add",
                PlainRule::new(e.clone(), e.clone(), g.clone()).unwrap(),
            ))
        };
        let p = Program::choice([add(&pl), add(&tk)]);
        let all = execute_all(&p, LocatedGraph::unmarked(e.clone()), &ExecOptions::default()).unwrap();
        assert_eq!(all.results.len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let e = TypedGraph::empty();
        let pl = TypedGraph::builder().node("p", "Pl").build().unwrap();
        let grow = Program::alap(Program::rule(Rule::plain(
            "grow",
            PlainRule::new(e.clone(), e.clone(), pl).unwrap(),
        )));
        let opts = ExecOptions {
            max_steps: 50,
            ..ExecOptions::default()
        };
        let err = execute(&grow, LocatedGraph::unmarked(e.clone()), &opts).unwrap_err();
        assert!(matches!(err, ExecError::StepBudget { ref trace, .. } if trace.iter().all(|n| n == "grow")));
        let all = execute_all(&grow, LocatedGraph::unmarked(e), &opts).unwrap();
        assert!(!all.complete);
    }

    #[test]
    fn same_seed_same_result() {
        let run = |seed| {
            execute(
                &deleter(),
                LocatedGraph::unmarked(parallel(5)),
                &ExecOptions::with_seed(seed),
            )
            .unwrap()
            .unwrap()
            .result
        };
        assert_eq!(run(7), run(7));
    }
}

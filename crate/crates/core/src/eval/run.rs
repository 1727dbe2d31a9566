use std::collections::HashMap;

use thiserror::Error;

use super::step::{step_program, successors, Scheduler, StepEvent};
use super::tick::{tick, TickError};
use crate::syntax::{Program, StateKey, ThreadId};

/// How a run chooses among successors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchedulerConfig {
    Seeded(u64),
    /// Explore every interleaving and every `get` choice, visiting at most
    /// `state_budget` distinct states.
    Exhaustive { state_budget: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RunConfig {
    /// Maximum number of `→` steps (seeded runs).
    pub fuel: u64,
    /// Maximum number of ticks.
    pub instants: u32,
    pub scheduler: SchedulerConfig,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ConfigError {
    #[error("fuel must be positive")]
    ZeroFuel,
    #[error("state budget must be positive")]
    ZeroBudget,
}

impl RunConfig {
    pub fn seeded(seed: u64, fuel: u64, instants: u32) -> Self {
        RunConfig { fuel, instants, scheduler: SchedulerConfig::Seeded(seed) }
    }

    pub fn exhaustive(state_budget: usize, instants: u32) -> Self {
        RunConfig { fuel: u64::MAX, instants, scheduler: SchedulerConfig::Exhaustive { state_budget } }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.fuel == 0 {
            return Err(ConfigError::ZeroFuel);
        }
        if let SchedulerConfig::Exhaustive { state_budget: 0 } = self.scheduler {
            return Err(ConfigError::ZeroBudget);
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceKind {
    Step(StepEvent),
    Tick,
}

/// One transition together with the state it leads to.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceEntry {
    /// Number of `→` steps taken so far, this one included.
    pub step: u64,
    /// Instant in which the resulting state lives.
    pub instant: u32,
    pub kind: TraceKind,
    pub state: Program,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub initial: Program,
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    /// The initial state followed by every visited state.
    pub fn states(&self) -> impl Iterator<Item = &Program> {
        std::iter::once(&self.initial).chain(self.entries.iter().map(|e| &e.state))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    /// Every explored path ended: quiescent at the instant limit, or at a
    /// tick fixpoint. Seeded runs have exactly one final state.
    Terminated { finals: Vec<Program>, steps: u64, instants: u32 },
    FuelExhausted { steps: u64, instants: u32 },
    StateBudgetExhausted { states: usize },
    /// A state recurred along a path within one instant.
    CycleDetected { state: Program, instant: u32 },
    TickUndefined { thread: ThreadId, term: String, instant: u32 },
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Terminated { .. } => "Terminated",
            Outcome::FuelExhausted { .. } => "FuelExhausted",
            Outcome::StateBudgetExhausted { .. } => "StateBudgetExhausted",
            Outcome::CycleDetected { .. } => "CycleDetected",
            Outcome::TickUndefined { .. } => "TickUndefined",
        }
    }

    pub fn is_terminated(&self) -> bool {
        matches!(self, Outcome::Terminated { .. })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub trace: Trace,
}

pub fn run(p: &Program, cfg: &RunConfig) -> Result<RunReport, ConfigError> {
    cfg.validate()?;
    Ok(match cfg.scheduler {
        SchedulerConfig::Seeded(seed) => run_seeded(p, seed, cfg.fuel, cfg.instants),
        SchedulerConfig::Exhaustive { state_budget } => run_exhaustive(p, state_budget, cfg.instants),
    })
}

fn run_seeded(p: &Program, seed: u64, fuel: u64, max_ticks: u32) -> RunReport {
    let mut sched = Scheduler::seeded(seed);
    let mut trace = Trace { initial: p.clone(), entries: Vec::new() };
    let mut current = p.clone();
    let (mut steps, mut instant) = (0u64, 0u32);
    let outcome = loop {
        if let Some((next, ev)) = step_program(&current, &mut sched).successors.pop() {
            if steps == fuel {
                break Outcome::FuelExhausted { steps, instants: instant };
            }
            steps += 1;
            trace.entries.push(TraceEntry { step: steps, instant, kind: TraceKind::Step(ev), state: next.clone() });
            current = next;
            continue;
        }
        if instant == max_ticks {
            break Outcome::Terminated { finals: vec![current], steps, instants: instant };
        }
        match tick(&current) {
            Ok(next) if next.alpha_eq(&current) => {
                break Outcome::Terminated { finals: vec![current], steps, instants: instant };
            }
            Ok(next) => {
                instant += 1;
                trace.entries.push(TraceEntry { step: steps, instant, kind: TraceKind::Tick, state: next.clone() });
                current = next;
            }
            Err(TickError::TickUndefined { thread, term }) => break Outcome::TickUndefined { thread, term, instant },
            Err(TickError::NotQuiescent) => unreachable!("no successors"),
        }
    };
    RunReport { outcome, trace }
}

/// A state of the explored graph.
#[derive(Clone, Debug)]
pub struct StateNode {
    pub program: Program,
    pub instant: u32,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: TraceKind,
}

/// The reachable state graph of a program, memoized on α-canonical states
/// per instant.
#[derive(Clone, Debug, Default)]
pub struct StateSpace {
    pub states: Vec<StateNode>,
    pub edges: Vec<Edge>,
    /// The edge that first discovered each state (none for the root).
    pub parent: Vec<Option<usize>>,
    /// States with no successor of either kind.
    pub finals: Vec<usize>,
    /// The first `→` cycle found: a path whose last state equals an earlier one.
    pub cycle: Option<Vec<usize>>,
    pub tick_failures: Vec<(usize, TickError)>,
    /// Set when the state budget cut exploration short.
    pub truncated: bool,
}

impl StateSpace {
    /// Edges on the discovery path from the root to `state`.
    pub fn path_to(&self, state: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut at = state;
        while let Some(e) = self.parent[at] {
            path.push(e);
            at = self.edges[e].from;
        }
        path.reverse();
        path
    }

    /// States that cannot `→`.
    pub fn quiescent(&self) -> impl Iterator<Item = usize> + '_ {
        let mut moves = vec![false; self.states.len()];
        for e in &self.edges {
            if matches!(e.kind, TraceKind::Step(_)) {
                moves[e.from] = true;
            }
        }
        (0..self.states.len()).filter(move |&i| !moves[i])
    }
}

struct Explorer {
    space: StateSpace,
    index: HashMap<(u32, StateKey), usize>,
    /// 0 unvisited, 1 on the DFS stack, 2 done.
    color: Vec<u8>,
    budget: usize,
}

impl Explorer {
    fn intern(&mut self, program: Program, instant: u32, via: Option<usize>) -> (usize, bool) {
        let key = (instant, program.state_key());
        if let Some(&i) = self.index.get(&key) {
            return (i, false);
        }
        let i = self.space.states.len();
        self.space.states.push(StateNode { program, instant });
        self.space.parent.push(via);
        self.color.push(0);
        self.index.insert(key, i);
        (i, true)
    }

    /// Successor edges of `node`, created on first expansion.
    fn expand(&mut self, node: usize, max_ticks: u32) -> Vec<usize> {
        let StateNode { program, instant } = self.space.states[node].clone();
        let mut out = Vec::new();
        let succ = successors(&program);
        if succ.is_empty() {
            if instant == max_ticks {
                self.space.finals.push(node);
                return out;
            }
            match tick(&program) {
                Ok(next) if next.alpha_eq(&program) => self.space.finals.push(node),
                Ok(next) => out.push(self.add_edge(node, next, instant + 1, TraceKind::Tick)),
                Err(e) => self.space.tick_failures.push((node, e)),
            }
            return out;
        }
        for (next, ev) in succ {
            out.push(self.add_edge(node, next, instant, TraceKind::Step(ev)));
        }
        out
    }

    fn add_edge(&mut self, from: usize, program: Program, instant: u32, kind: TraceKind) -> usize {
        let e = self.space.edges.len();
        self.space.edges.push(Edge { from, to: usize::MAX, kind });
        let (to, _) = self.intern(program, instant, Some(e));
        self.space.edges[e].to = to;
        e
    }
}

/// Depth-first exploration of every interleaving, up to `budget` states.
pub fn explore(p: &Program, budget: usize, max_ticks: u32) -> StateSpace {
    let mut ex = Explorer { space: StateSpace::default(), index: HashMap::new(), color: Vec::new(), budget };
    let (root, _) = ex.intern(p.clone(), 0, None);
    let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    ex.color[root] = 1;
    let edges = ex.expand(root, max_ticks);
    stack.push((root, edges, 0));
    while let Some((node, edges, next)) = stack.last_mut() {
        let Some(&e) = edges.get(*next) else {
            ex.color[*node] = 2;
            stack.pop();
            continue;
        };
        *next += 1;
        let to = ex.space.edges[e].to;
        match ex.color[to] {
            0 => {
                if ex.space.states.len() > ex.budget {
                    ex.space.truncated = true;
                    break;
                }
                ex.color[to] = 1;
                let out = ex.expand(to, max_ticks);
                stack.push((to, out, 0));
            }
            1 if ex.space.cycle.is_none() => {
                let mut path: Vec<usize> = stack.iter().map(|(n, _, _)| *n).collect();
                path.push(to);
                ex.space.cycle = Some(path);
            }
            _ => {}
        }
    }
    if ex.space.states.len() > ex.budget {
        ex.space.truncated = true;
    }
    ex.space
}

fn run_exhaustive(p: &Program, budget: usize, max_ticks: u32) -> RunReport {
    let space = explore(p, budget, max_ticks);
    let node_trace = |path: &[usize]| -> Trace {
        let mut entries = Vec::new();
        let mut steps = 0;
        for w in path.windows(2) {
            let e = space.edges.iter().find(|e| e.from == w[0] && e.to == w[1]).expect("path follows edges");
            if matches!(e.kind, TraceKind::Step(_)) {
                steps += 1;
            }
            let to = &space.states[w[1]];
            entries.push(TraceEntry { step: steps, instant: to.instant, kind: e.kind.clone(), state: to.program.clone() });
        }
        Trace { initial: p.clone(), entries }
    };
    let discovery = |state: usize| -> Vec<usize> {
        let mut nodes = vec![0];
        nodes.extend(space.path_to(state).into_iter().map(|e| space.edges[e].to));
        nodes
    };

    if let Some(path) = &space.cycle {
        let last = *path.last().expect("nonempty cycle path");
        let node = &space.states[last];
        return RunReport {
            outcome: Outcome::CycleDetected { state: node.program.clone(), instant: node.instant },
            trace: node_trace(path),
        };
    }
    if let Some((node, TickError::TickUndefined { thread, term })) = space.tick_failures.first() {
        return RunReport {
            outcome: Outcome::TickUndefined { thread: *thread, term: term.clone(), instant: space.states[*node].instant },
            trace: node_trace(&discovery(*node)),
        };
    }
    if space.truncated {
        return RunReport {
            outcome: Outcome::StateBudgetExhausted { states: space.states.len() },
            trace: Trace { initial: p.clone(), entries: Vec::new() },
        };
    }
    let first = space.finals.first().copied().unwrap_or(0);
    let trace = node_trace(&discovery(first));
    let mut finals: Vec<Program> = Vec::new();
    for &f in &space.finals {
        let prog = &space.states[f].program;
        if !finals.iter().any(|q| q.alpha_eq(prog)) {
            finals.push(prog.clone());
        }
    }
    let steps = space.edges.iter().filter(|e| matches!(e.kind, TraceKind::Step(_))).count() as u64;
    let instants = space.states.iter().map(|s| s.instant).max().unwrap_or(0);
    RunReport { outcome: Outcome::Terminated { finals, steps, instants }, trace }
}

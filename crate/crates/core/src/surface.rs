//! Concrete store disciplines and their simulation by regions.
//!
//! Terms are shared with the core calculus; only the store differs. A
//! reference holds at most one value and `set` replaces it. A channel holds a
//! multiset and `get` consumes one occurrence. A signal holds a set that
//! persists through the instant and is cleared at the tick.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::eval::{decompose, tick_thread, Redex, StepEvent, StepRule};
use crate::syntax::{Program, RegionName, Store, Term};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Discipline {
    Reference,
    Channel,
    Signal,
}

impl Discipline {
    pub fn name(self) -> &'static str {
        match self {
            Discipline::Reference => "reference",
            Discipline::Channel => "channel",
            Discipline::Signal => "signal",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SurfaceError {
    #[error("reference {0} cannot start with more than one value")]
    ManyReferenceValues(RegionName),
    #[error("simulation failed: surface step {event} from {from} has no matching core step within {k} steps")]
    Counterexample { from: String, event: String, k: usize },
    #[error("{discipline} invariant violated: {detail}")]
    Invariant { discipline: &'static str, detail: String },
}

/// A store under one discipline. Values are kept α-canonical and sorted so
/// that equal stores compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SurfaceStore {
    pub discipline: Discipline,
    cells: BTreeMap<RegionName, Vec<Term>>,
}

impl SurfaceStore {
    pub fn new(discipline: Discipline) -> Self {
        SurfaceStore { discipline, cells: BTreeMap::new() }
    }

    pub fn from_core(discipline: Discipline, store: &Store) -> Result<Self, SurfaceError> {
        let mut s = SurfaceStore::new(discipline);
        for (r, v) in store.iter() {
            if discipline == Discipline::Reference && s.count(r) > 0 {
                return Err(SurfaceError::ManyReferenceValues(r.clone()));
            }
            s.write(r.clone(), v.clone());
        }
        Ok(s)
    }

    pub fn values(&self, r: &RegionName) -> &[Term] {
        self.cells.get(r).map_or(&[], Vec::as_slice)
    }

    /// Occurrences stored at `r`, counting channel duplicates.
    pub fn count(&self, r: &RegionName) -> usize {
        self.values(r).len()
    }

    pub fn occurrences(&self, r: &RegionName, v: &Term) -> usize {
        let v = v.canonical();
        self.values(r).iter().filter(|w| **w == v).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RegionName, &Term)> {
        self.cells.iter().flat_map(|(r, vs)| vs.iter().map(move |v| (r, v)))
    }

    /// Apply `set(r, v)`.
    pub fn write(&mut self, r: RegionName, v: Term) {
        let v = v.canonical();
        let cell = self.cells.entry(r).or_default();
        match self.discipline {
            Discipline::Reference => *cell = vec![v],
            Discipline::Channel => {
                let at = cell.partition_point(|w| *w <= v);
                cell.insert(at, v);
            }
            Discipline::Signal => {
                if let Err(at) = cell.binary_search(&v) {
                    cell.insert(at, v);
                }
            }
        }
    }

    /// Each distinct readable value with the store left after reading it.
    pub fn reads(&self, r: &RegionName) -> Vec<(Term, SurfaceStore)> {
        let mut out: Vec<(Term, SurfaceStore)> = Vec::new();
        for (i, v) in self.values(r).iter().enumerate() {
            if out.iter().any(|(w, _)| w == v) {
                continue;
            }
            let mut next = self.clone();
            if self.discipline == Discipline::Channel {
                let cell = next.cells.get_mut(r).expect("value found");
                cell.remove(i);
                if cell.is_empty() {
                    next.cells.remove(r);
                }
            }
            out.push((v.clone(), next));
        }
        out
    }

    /// The store after the tick.
    pub fn ticked(&self) -> SurfaceStore {
        match self.discipline {
            Discipline::Signal => SurfaceStore::new(Discipline::Signal),
            _ => self.clone(),
        }
    }

    /// The grow-only region store holding every value present here.
    pub fn abstraction(&self) -> Store {
        let mut s = Store::new();
        for (r, v) in self.iter() {
            s.insert(r.clone(), v.clone());
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

impl fmt::Display for SurfaceStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (r, vs)) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let vs: Vec<String> = vs.iter().map(Term::to_string).collect();
            write!(f, "{r} <= [{}]", vs.join(", "))?;
        }
        Ok(())
    }
}

/// `→` on one thread under a store discipline.
pub fn surface_step(t: &Term, s: &SurfaceStore) -> Vec<(Term, SurfaceStore, StepEvent)> {
    let Ok(d) = decompose(t) else { return Vec::new() };
    let Some(redex) = d.redex() else { return Vec::new() };
    let ctx = d.context().red();
    let event = |rule, value: Option<&Term>| StepEvent {
        thread: None,
        rule,
        region: redex.region().cloned(),
        value: value.cloned(),
        redex: redex.term(),
        store_grew: false,
    };
    match redex {
        Redex::Beta { param, body, arg, .. } => {
            vec![(ctx.plug(body.substitute(param, arg)), s.clone(), event(StepRule::Beta, None))]
        }
        Redex::Prim(p) => vec![(ctx.plug(p.contract()), s.clone(), event(StepRule::Prim, None))],
        Redex::Get(r) => {
            s.reads(r).into_iter().map(|(v, next)| (ctx.plug(v.clone()), next, event(StepRule::Get, Some(&v)))).collect()
        }
        Redex::Set(r, v) => {
            let mut next = s.clone();
            next.write(r.clone(), v.clone());
            vec![(ctx.plug(Term::Unit), next, event(StepRule::Set, Some(v)))]
        }
    }
}

/// Threads plus a discipline store.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceProgram {
    pub threads: Vec<Term>,
    pub store: SurfaceStore,
}

fn split_into(t: Term, out: &mut Vec<Term>) {
    match t {
        Term::Par(ts) => ts.into_iter().for_each(|t| split_into(t, out)),
        t => out.push(t),
    }
}

impl SurfaceProgram {
    pub fn new(threads: Vec<Term>, store: SurfaceStore) -> Self {
        let mut split = Vec::new();
        threads.into_iter().for_each(|t| split_into(t, &mut split));
        SurfaceProgram { threads: split, store }
    }

    pub fn from_program(p: &Program, d: Discipline) -> Result<Self, SurfaceError> {
        Ok(SurfaceProgram::new(p.terms().cloned().collect(), SurfaceStore::from_core(d, &p.store)?))
    }

    fn key(&self) -> (Vec<Term>, SurfaceStore) {
        let mut ts: Vec<Term> = self.threads.iter().map(Term::canonical).collect();
        ts.sort();
        (ts, self.store.clone())
    }

    pub fn successors(&self) -> Vec<(SurfaceProgram, StepEvent)> {
        let mut out = Vec::new();
        for (i, t) in self.threads.iter().enumerate() {
            for (next, store, ev) in surface_step(t, &self.store) {
                let mut threads = self.threads.clone();
                threads.remove(i);
                split_into(next, &mut threads);
                out.push((SurfaceProgram { threads, store }, ev));
            }
        }
        out
    }

    /// The tick, or `None` if some thread can still step or has no tick rule.
    pub fn tick(&self) -> Option<SurfaceProgram> {
        if !self.successors().is_empty() {
            return None;
        }
        let threads = self.threads.iter().map(tick_thread).collect::<Option<Vec<_>>>()?;
        Some(SurfaceProgram::new(threads, self.store.ticked()))
    }
}

/// The region program a surface program is abstracted to.
pub fn abstract_to_regions(p: &SurfaceProgram) -> Program {
    Program::new(p.threads.clone(), p.store.abstraction())
}

/// Same thread multiset, and the core store contains the surface store.
fn related(surface: &SurfaceProgram, core: &Program) -> bool {
    let mut ts: Vec<Term> = surface.threads.iter().map(Term::canonical).collect();
    ts.sort();
    ts == core.state_key().threads && surface.store.abstraction().is_subset_of(&core.store)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SimulationReport {
    pub discipline: Discipline,
    pub surface_states: usize,
    pub surface_steps: usize,
    /// Largest number of core steps needed to match one surface step.
    pub max_core_steps: usize,
    pub truncated: bool,
}

/// Core steps allowed to match one surface step.
pub const MAX_CORE_STEPS: usize = 4;

/// Find a core state related to `target` within `1..=MAX_CORE_STEPS` steps.
fn match_step(from: &Program, target: &SurfaceProgram) -> Option<(Program, usize)> {
    let mut frontier = vec![from.clone()];
    for k in 1..=MAX_CORE_STEPS {
        let mut next = Vec::new();
        for p in &frontier {
            for (q, _) in crate::eval::successors(p) {
                if related(target, &q) {
                    return Some((q, k));
                }
                next.push(q);
            }
        }
        frontier = next;
    }
    None
}

fn check_invariants(
    from: &SurfaceProgram,
    to: &SurfaceProgram,
    ev: &StepEvent,
) -> Result<(), SurfaceError> {
    let fail = |detail: String| Err(SurfaceError::Invariant { discipline: from.store.discipline.name(), detail });
    if let Some((r, _)) = to.store.cells.iter().find(|(_, vs)| from.store.discipline == Discipline::Reference && vs.len() > 1) {
        return fail(format!("reference {r} holds more than one value"));
    }
    if let (StepRule::Get, Some(r), Some(v)) = (ev.rule, &ev.region, &ev.value) {
        let (before, after) = (from.store.occurrences(r, v), to.store.occurrences(r, v));
        let consumed = match from.store.discipline {
            Discipline::Channel => 1,
            Discipline::Reference | Discipline::Signal => 0,
        };
        if before != after + consumed {
            return fail(format!("read of {v} at {r} left {after} of {before} occurrences"));
        }
    }
    Ok(())
}

/// Explore the surface program within its first instant and check that every
/// step is matched by at most `MAX_CORE_STEPS` core steps that preserve the
/// relation. At every quiescent state the tick must be defined, and a
/// signal store must be empty after it.
pub fn check_simulation(p: &SurfaceProgram, budget: usize) -> Result<SimulationReport, SurfaceError> {
    let mut report = SimulationReport {
        discipline: p.store.discipline,
        surface_states: 1,
        surface_steps: 0,
        max_core_steps: 0,
        truncated: false,
    };
    let mut seen = HashMap::from([(p.key(), ())]);
    let mut queue = VecDeque::from([(p.clone(), abstract_to_regions(p))]);
    while let Some((s, core)) = queue.pop_front() {
        let succ = s.successors();
        if succ.is_empty() {
            let ticked = s.tick().ok_or_else(|| SurfaceError::Invariant {
                discipline: s.store.discipline.name(),
                detail: format!("no tick rule applies to a quiescent state with store {}", s.store),
            })?;
            if s.store.discipline == Discipline::Signal && !ticked.store.is_empty() {
                return Err(SurfaceError::Invariant { discipline: "signal", detail: "store survived the tick".into() });
            }
        }
        for (next, ev) in succ {
            report.surface_steps += 1;
            check_invariants(&s, &next, &ev)?;
            let (witness, k) = match_step(&core, &next).ok_or_else(|| SurfaceError::Counterexample {
                from: format!("{} || {}", s.threads.iter().map(Term::to_string).collect::<Vec<_>>().join(" | "), s.store),
                event: format!("{} {}", ev.rule.name(), ev.redex),
                k: MAX_CORE_STEPS,
            })?;
            report.max_core_steps = report.max_core_steps.max(k);
            if seen.contains_key(&next.key()) {
                continue;
            }
            if seen.len() >= budget {
                report.truncated = true;
                continue;
            }
            seen.insert(next.key(), ());
            report.surface_states += 1;
            queue.push_back((next, witness));
        }
    }
    Ok(report)
}

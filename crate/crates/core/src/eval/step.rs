use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use super::decompose::{decompose, Decomposition, Delta, Redex};
use crate::syntax::{Program, RegionName, Store, Term, ThreadId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRule {
    Beta,
    Get,
    Set,
    Prim,
}

impl StepRule {
    pub fn name(self) -> &'static str {
        match self {
            StepRule::Beta => "beta",
            StepRule::Get => "get",
            StepRule::Set => "set",
            StepRule::Prim => "prim",
        }
    }
}

/// One `→` step: which thread moved, by which rule, and what it touched.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepEvent {
    /// Filled in at the program level.
    pub thread: Option<ThreadId>,
    pub rule: StepRule,
    pub region: Option<RegionName>,
    /// The value read by `get` or written by `set`.
    pub value: Option<Term>,
    pub redex: Term,
    /// Whether a `set` added a value that was not already stored.
    pub store_grew: bool,
}

/// All `→` successors of a single thread in store `store`. Empty when the
/// thread is a value, blocked on an empty region, or not decomposable.
pub fn step_thread(t: &Term, store: &Store) -> Vec<(Term, Store, StepEvent)> {
    let Ok(d) = decompose(t) else { return Vec::new() };
    let Some(redex) = d.redex() else { return Vec::new() };
    let ctx = d.context().red();
    let event = |rule, region: Option<&RegionName>, value: Option<&Term>| StepEvent {
        thread: None,
        rule,
        region: region.cloned(),
        value: value.cloned(),
        redex: redex.term(),
        store_grew: false,
    };
    match redex {
        Redex::Beta { param, body, arg, .. } => {
            vec![(ctx.plug(body.substitute(param, arg)), store.clone(), event(StepRule::Beta, None, None))]
        }
        Redex::Get(r) => store
            .values(r)
            .map(|v| (ctx.plug(v.clone()), store.clone(), event(StepRule::Get, Some(r), Some(v))))
            .collect(),
        Redex::Set(r, v) => {
            let mut next = store.clone();
            let grew = next.insert(r.clone(), v.clone());
            let mut ev = event(StepRule::Set, Some(r), Some(v));
            ev.store_grew = grew;
            vec![(ctx.plug(Term::Unit), next, ev)]
        }
        Redex::Prim(p) => vec![(ctx.plug(p.contract()), store.clone(), event(StepRule::Prim, None, None))],
    }
}

/// Every `(thread, successor)` pair of `p`, threads in order.
pub fn successors(p: &Program) -> Vec<(Program, StepEvent)> {
    let mut out = Vec::new();
    for (i, th) in p.threads.iter().enumerate() {
        for (term, store, mut ev) in step_thread(&th.term, &p.store) {
            let mut next = p.clone();
            next.store = store;
            next.replace_thread(i, term);
            ev.thread = Some(th.id);
            out.push((next, ev));
        }
    }
    out
}

/// How `step_program` picks among successors.
#[derive(Clone, Debug)]
pub enum Scheduler {
    /// Uniform choice driven by a seeded generator, for replayable runs.
    Seeded(ChaCha8Rng),
    Exhaustive,
}

impl Scheduler {
    pub fn seeded(seed: u64) -> Self {
        Scheduler::Seeded(ChaCha8Rng::seed_from_u64(seed))
    }
}

/// Successors of one program step; empty iff the program cannot `→`.
#[derive(Clone, Debug)]
pub struct StepResult {
    pub successors: Vec<(Program, StepEvent)>,
}

impl StepResult {
    pub fn is_stuck(&self) -> bool {
        self.successors.is_empty()
    }
}

pub fn step_program(p: &Program, scheduler: &mut Scheduler) -> StepResult {
    let mut all = successors(p);
    match scheduler {
        Scheduler::Exhaustive => StepResult { successors: all },
        Scheduler::Seeded(rng) => {
            if all.is_empty() {
                return StepResult { successors: all };
            }
            let pick = rng.gen_range(0..all.len());
            StepResult { successors: vec![all.swap_remove(pick)] }
        }
    }
}

/// Whether a value sits under a pending `elsenext` waiting for the tick.
pub fn waits_for_tick(t: &Term) -> bool {
    matches!(decompose(t), Ok(Decomposition::UnderElseNext { delta: Delta::Value(_), .. }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Effect, Type};

    fn r() -> RegionName {
        RegionName::new("r")
    }

    fn loop_fn() -> Term {
        // λx:1.(get r) x
        Term::lam("x", Type::Unit, Term::app(Term::get(Term::region("r")), Term::var("x")))
    }

    #[test]
    fn get_reads_each_stored_value() {
        let s = Store::new().with("r", Term::Unit);
        let out = step_thread(&Term::get(Term::region("r")), &s);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, Term::Unit);
        assert_eq!(out[0].1, s);
        assert!(step_thread(&Term::get(Term::region("r")), &Store::new()).is_empty());
    }

    #[test]
    fn set_adds_and_is_idempotent() {
        let t = Term::set(Term::region("r"), Term::Unit);
        let out = step_thread(&t, &Store::new());
        assert_eq!(out[0].0, Term::Unit);
        assert!(out[0].1.contains(&r(), &Term::Unit));
        assert!(out[0].2.store_grew);
        let again = step_thread(&t, &out[0].1);
        assert!(again[0].1.alpha_eq(&out[0].1));
        assert!(!again[0].2.store_grew);
    }

    #[test]
    fn beta_drops_pending_else_next() {
        // ((λx.x) *) elsenext n  →  *
        let t = Term::else_next(Term::app(Term::lam("x", Type::Unit, Term::var("x")), Term::Unit), Term::var("n"));
        let out = step_thread(&t, &Store::new());
        assert_eq!(out[0].0, Term::Unit);
    }

    #[test]
    fn divergent_cycle_recurs() {
        // get(ref_r(λx.get r x)) *  expanded
        let ref_r = Term::app(Term::lam("y", Type::Unit, Term::region("r")), Term::set(Term::region("r"), loop_fn()));
        let start = Term::app(Term::get(ref_r), Term::Unit);
        let mut states = vec![(start, Store::new())];
        for _ in 0..4 {
            let (t, s) = states.last().unwrap().clone();
            let next = step_thread(&t, &s);
            assert_eq!(next.len(), 1);
            states.push((next[0].0.clone(), next[0].1.clone()));
        }
        let get_r_unit = Term::app(Term::get(Term::region("r")), Term::Unit);
        assert!(states[2].0.alpha_eq(&get_r_unit));
        assert!(states[3].0.alpha_eq(&Term::app(loop_fn(), Term::Unit)));
        assert!(states[4].0.alpha_eq(&states[2].0));
        assert!(states[4].1.alpha_eq(&states[2].1));
        let _ = Effect::empty();
    }

    #[test]
    fn exhaustive_enumerates_threads_and_values() {
        let id = Term::lam("x", Type::Unit, Term::var("x"));
        let beta = Term::app(id.clone(), Term::Unit);
        let p = Program::new(vec![beta.clone(), beta], Store::new());
        assert_eq!(step_program(&p, &mut Scheduler::Exhaustive).successors.len(), 2);

        let s = Store::new().with("r", Term::Unit).with("r", id);
        let q = Program::new(vec![Term::get(Term::region("r"))], s);
        assert_eq!(step_program(&q, &mut Scheduler::Exhaustive).successors.len(), 2);
        assert_eq!(step_program(&q, &mut Scheduler::seeded(3)).successors.len(), 1);

        let stuck = Program::new(vec![Term::get(Term::region("r"))], Store::new());
        assert!(step_program(&stuck, &mut Scheduler::Exhaustive).is_stuck());
    }
}

//! JSON-lines trace records.
//!
//! One record per transition. Fields: `step` (→ steps so far), `instant`,
//! `thread` (null for ticks), `rule` (`beta`, `get`, `set`, `prim`, `tick`),
//! `redex` (null for ticks), `store_delta` (`{"region", "value"}` when a
//! `set` added a new value, else null), and `state_hash`, the first 16 hex
//! digits of the SHA-256 of the α-canonical resulting state.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::eval::{Trace, TraceKind};
use crate::syntax::Program;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StoreDelta {
    pub region: String,
    pub value: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub instant: u32,
    pub thread: Option<u32>,
    pub rule: &'static str,
    pub redex: Option<String>,
    pub store_delta: Option<StoreDelta>,
    pub state_hash: String,
}

/// Rendering of the α-canonical state: sorted threads, then the store.
pub fn canonical_rendering(p: &Program) -> String {
    let key = p.state_key();
    let threads: Vec<String> = key.threads.iter().map(ToString::to_string).collect();
    let store: Vec<String> = key
        .store
        .iter()
        .map(|(r, vs)| format!("{r} <= {{{}}}", vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("{} || {}", threads.join(" | "), store.join(", "))
}

pub fn state_hash(p: &Program) -> String {
    let digest = Sha256::digest(canonical_rendering(p).as_bytes());
    hex::encode(&digest[..8])
}

pub fn records(trace: &Trace) -> Vec<TraceRecord> {
    trace
        .entries
        .iter()
        .map(|e| {
            let state_hash = state_hash(&e.state);
            match &e.kind {
                TraceKind::Tick => TraceRecord {
                    step: e.step,
                    instant: e.instant,
                    thread: None,
                    rule: "tick",
                    redex: None,
                    store_delta: None,
                    state_hash,
                },
                TraceKind::Step(ev) => TraceRecord {
                    step: e.step,
                    instant: e.instant,
                    thread: ev.thread.map(|t| t.0),
                    rule: ev.rule.name(),
                    redex: Some(ev.redex.to_string()),
                    store_delta: match (&ev.region, &ev.value, ev.store_grew) {
                        (Some(r), Some(v), true) => Some(StoreDelta { region: r.to_string(), value: v.to_string() }),
                        _ => None,
                    },
                    state_hash,
                },
            }
        })
        .collect()
}

pub fn to_json_lines(trace: &Trace) -> String {
    records(trace)
        .iter()
        .map(|r| serde_json::to_string(r).expect("trace records serialize") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{run, RunConfig};
    use crate::syntax::{Store, Term, Type};

    #[test]
    fn hash_ignores_bound_names_and_thread_order() {
        let id = |x: &str| Term::lam(x, Type::Unit, Term::var(x));
        let a = Program::new(vec![id("x"), Term::Unit], Store::new());
        let b = Program::new(vec![Term::Unit, id("y")], Store::new());
        assert_eq!(state_hash(&a), state_hash(&b));
        assert_eq!(state_hash(&a).len(), 16);
    }

    #[test]
    fn records_mark_store_growth() {
        let set = Term::set(Term::region("r"), Term::Unit);
        let p = Program::new(vec![set.clone(), set], Store::new());
        let report = run(&p, &RunConfig::seeded(0, 10, 0)).unwrap();
        let recs = records(&report.trace);
        assert_eq!(recs.len(), 2);
        assert!(recs[0].store_delta.is_some());
        assert!(recs[1].store_delta.is_none());
        let line = to_json_lines(&report.trace);
        assert!(line.starts_with("{\"step\":1,\"instant\":0,\"thread\":"));
    }
}

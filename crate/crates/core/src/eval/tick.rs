use thiserror::Error;

use super::decompose::{decompose, Decomposition, Delta, Redex};
use super::step::successors;
use crate::syntax::{Program, Term, ThreadId};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TickError {
    #[error("the program can still reduce within the current instant")]
    NotQuiescent,
    #[error("no tick rule applies to thread {thread:?}: {term}")]
    TickUndefined { thread: ThreadId, term: String },
}

/// The end-of-instant rewrite of one quiescent thread, or `None` if no rule
/// applies.
pub fn tick_thread(t: &Term) -> Option<Term> {
    match decompose(t).ok()? {
        Decomposition::IsValue(v) => Some(v),
        Decomposition::Redex { redex: Redex::Get(_), .. } => Some(t.clone()),
        Decomposition::UnderElseNext { outer, delta: Delta::Value(_) | Delta::Redex(Redex::Get(_)), later, .. } => {
            Some(outer.plug(later))
        }
        _ => None,
    }
}

/// `P ⇥ P'`. Defined only when `P` cannot `→`; the store is unchanged and
/// top-level parallel compositions produced by the rewrite are split.
pub fn tick(p: &Program) -> Result<Program, TickError> {
    if !successors(p).is_empty() {
        return Err(TickError::NotQuiescent);
    }
    let mut next = p.clone();
    for i in (0..p.threads.len()).rev() {
        let th = &p.threads[i];
        let term = tick_thread(&th.term).ok_or_else(|| TickError::TickUndefined { thread: th.id, term: th.term.to_string() })?;
        next.replace_thread(i, term);
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Store, Type};

    #[test]
    fn else_next_fires_on_value() {
        let p = Program::new(vec![Term::else_next(Term::Unit, Term::var("n"))], Store::new());
        let q = tick(&p).unwrap();
        assert_eq!(q.threads[0].term, Term::var("n"));
    }

    #[test]
    fn else_next_fires_on_blocked_read() {
        // ((λx.M)(get r)) elsenext N with r empty
        let now = Term::app(Term::lam("x", Type::Unit, Term::var("x")), Term::get(Term::region("r")));
        let p = Program::new(vec![Term::else_next(now, Term::Int(7))], Store::new());
        assert_eq!(tick(&p).unwrap().threads[0].term, Term::Int(7));
    }

    #[test]
    fn blocked_read_persists() {
        let t = Term::app(Term::lam("x", Type::Unit, Term::var("x")), Term::get(Term::region("r")));
        let p = Program::new(vec![t.clone(), Term::Unit], Store::new());
        let q = tick(&p).unwrap();
        assert_eq!(q.threads[0].term, t);
        assert_eq!(q.threads[1].term, Term::Unit);
    }

    #[test]
    fn not_quiescent() {
        let p = Program::new(vec![Term::set(Term::region("r"), Term::Unit)], Store::new());
        assert_eq!(tick(&p), Err(TickError::NotQuiescent));
    }

    #[test]
    fn tick_splits_spawned_threads() {
        let p = Program::new(vec![Term::else_next(Term::Unit, Term::par(vec![Term::Unit, Term::Int(1)]))], Store::new());
        assert_eq!(tick(&p).unwrap().threads.len(), 2);
    }

    #[test]
    fn stuck_non_redex_is_undefined() {
        let p = Program::new(vec![Term::app(Term::Unit, Term::Unit)], Store::new());
        assert!(matches!(tick(&p), Err(TickError::TickUndefined { .. })));
    }
}

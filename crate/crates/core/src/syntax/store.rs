use std::collections::{BTreeMap, BTreeSet};

use super::term::Term;
use super::types::RegionName;

/// A grow-only store: each region holds a set of closed values, deduplicated
/// up to α-equivalence.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Store {
    // canonical form -> first representative inserted
    regions: BTreeMap<RegionName, BTreeMap<Term, Term>>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    /// Add `value` to region `r`. Returns `false` when an α-variant was
    /// already present. Panics if `value` is not a value.
    pub fn insert(&mut self, r: RegionName, value: Term) -> bool {
        assert!(value.is_value(), "stores hold values only");
        let slot = self.regions.entry(r).or_default();
        let key = value.canonical();
        if slot.contains_key(&key) {
            false
        } else {
            slot.insert(key, value);
            true
        }
    }

    pub fn with(mut self, r: impl Into<RegionName>, value: Term) -> Self {
        self.insert(r.into(), value);
        self
    }

    /// Values held by `r`, in canonical order.
    pub fn values(&self, r: &RegionName) -> impl Iterator<Item = &Term> {
        self.regions.get(r).into_iter().flat_map(|m| m.values())
    }

    pub fn count(&self, r: &RegionName) -> usize {
        self.regions.get(r).map_or(0, BTreeMap::len)
    }

    pub fn contains(&self, r: &RegionName, value: &Term) -> bool {
        self.regions.get(r).is_some_and(|m| m.contains_key(&value.canonical()))
    }

    /// Regions bound by the store (`dom(S)`), including regions bound to nothing.
    pub fn domain(&self) -> BTreeSet<RegionName> {
        self.regions.iter().filter(|(_, v)| !v.is_empty()).map(|(r, _)| r.clone()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RegionName, &Term)> {
        self.regions.iter().flat_map(|(r, m)| m.values().map(move |v| (r, v)))
    }

    pub fn is_empty(&self) -> bool {
        self.regions.values().all(BTreeMap::is_empty)
    }

    /// `r<=v1, r<=v2` identified with `r<=v1∪v2`.
    pub fn merge(&mut self, other: &Store) {
        for (r, v) in other.iter() {
            self.insert(r.clone(), v.clone());
        }
    }

    /// `S|e`: the store restricted to `regions`.
    pub fn restrict(&self, regions: &BTreeSet<RegionName>) -> Store {
        Store {
            regions: self
                .regions
                .iter()
                .filter(|(r, _)| regions.contains(*r))
                .map(|(r, m)| (r.clone(), m.clone()))
                .collect(),
        }
    }

    /// Per-region containment up to α.
    pub fn is_subset_of(&self, other: &Store) -> bool {
        self.iter().all(|(r, v)| other.contains(r, v))
    }

    /// Stores compared up to α on their values.
    pub fn alpha_eq(&self, other: &Store) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn canonical(&self) -> Vec<(RegionName, Vec<Term>)> {
        self.regions
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(r, m)| (r.clone(), m.keys().cloned().collect()))
            .collect()
    }

    pub fn map_values(&self, f: impl Fn(&Term) -> Term) -> Store {
        let mut out = Store::new();
        for (r, v) in self.iter() {
            out.insert(r.clone(), f(v));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ThreadId(pub u32);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Thread {
    pub id: ThreadId,
    pub term: Term,
}

/// A multiset of threads together with a store.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Program {
    pub threads: Vec<Thread>,
    pub store: Store,
    next_id: u32,
}

/// α-canonical whole-program state: threads as a sorted multiset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateKey {
    pub threads: Vec<Term>,
    pub store: Vec<(RegionName, Vec<Term>)>,
}

impl Program {
    /// Build a program; top-level `Par` threads are split.
    pub fn new(threads: Vec<Term>, store: Store) -> Self {
        let mut p = Program { threads: Vec::new(), store, next_id: 0 };
        for t in threads {
            p.spawn(t);
        }
        p
    }

    /// Add a thread, splitting top-level parallel compositions.
    pub fn spawn(&mut self, term: Term) {
        match term {
            Term::Par(parts) => parts.into_iter().for_each(|t| self.spawn(t)),
            term => {
                let id = ThreadId(self.next_id);
                self.next_id += 1;
                self.threads.push(Thread { id, term });
            }
        }
    }

    /// Replace thread at `index` with `term`, splitting it if it became a `Par`.
    /// The thread keeps its id unless it splits.
    pub fn replace_thread(&mut self, index: usize, term: Term) {
        match term {
            Term::Par(parts) => {
                self.threads.remove(index);
                parts.into_iter().for_each(|t| self.spawn(t));
            }
            term => self.threads[index].term = term,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.threads.iter().map(|t| &t.term)
    }

    pub fn state_key(&self) -> StateKey {
        let mut threads: Vec<Term> = self.terms().map(Term::canonical).collect();
        threads.sort();
        StateKey { threads, store: self.store.canonical() }
    }

    pub fn alpha_eq(&self, other: &Program) -> bool {
        self.state_key() == other.state_key()
    }

    pub fn all_values(&self) -> bool {
        self.terms().all(Term::is_value)
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Program {
        Program {
            threads: self.threads.iter().map(|t| Thread { id: t.id, term: f(&t.term) }).collect(),
            store: self.store.map_values(&f),
            next_id: self.next_id,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Type;

    fn r() -> RegionName {
        RegionName::new("r")
    }

    #[test]
    fn insert_dedups_alpha_variants() {
        let mut s = Store::new();
        assert!(s.insert(r(), Term::lam("x", Type::Unit, Term::var("x"))));
        assert!(!s.insert(r(), Term::lam("y", Type::Unit, Term::var("y"))));
        assert_eq!(s.count(&r()), 1);
        assert!(s.insert(r(), Term::Unit));
        assert_eq!(s.count(&r()), 2);
    }

    #[test]
    #[should_panic]
    fn insert_rejects_non_values() {
        Store::new().insert(r(), Term::get(Term::region("r")));
    }

    #[test]
    fn restrict_and_domain() {
        let s = Store::new().with("r", Term::Unit).with("s", Term::Int(3));
        let only_r = s.restrict(&BTreeSet::from([r()]));
        assert_eq!(only_r.domain(), BTreeSet::from([r()]));
        assert!(only_r.is_subset_of(&s));
        assert!(!s.is_subset_of(&only_r));
    }

    #[test]
    fn programs_split_par_and_compare_as_multisets() {
        let p = Program::new(vec![Term::par(vec![Term::Unit, Term::Int(1)])], Store::new());
        assert_eq!(p.threads.len(), 2);
        let q = Program::new(vec![Term::Int(1), Term::Unit], Store::new());
        assert!(p.alpha_eq(&q));
    }
}

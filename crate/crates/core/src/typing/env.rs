use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Effect, RegionName, Type};

/// Which typing system to use.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SystemMode {
    Unstratified,
    Stratified,
    /// Effects erased, no subtyping.
    EffectFree,
}

impl SystemMode {
    pub fn name(self) -> &'static str {
        match self {
            SystemMode::Unstratified => "unstratified",
            SystemMode::Stratified => "stratified",
            SystemMode::EffectFree => "effect-free",
        }
    }
}

impl fmt::Display for SystemMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `r1:A1, …, rn:An`. Order matters in the stratified system.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct RegionContext {
    entries: Vec<(RegionName, Type)>,
}

impl RegionContext {
    pub fn new() -> Self {
        RegionContext::default()
    }

    pub fn from_entries(entries: Vec<(RegionName, Type)>) -> Self {
        RegionContext { entries }
    }

    pub fn with(mut self, r: impl Into<RegionName>, ty: Type) -> Self {
        self.entries.push((r.into(), ty));
        self
    }

    pub fn push(&mut self, r: RegionName, ty: Type) {
        self.entries.push((r, ty));
    }

    pub fn entries(&self) -> &[(RegionName, Type)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `R(r)`
    pub fn get(&self, r: &RegionName) -> Option<&Type> {
        self.entries.iter().find(|(name, _)| name == r).map(|(_, ty)| ty)
    }

    pub fn position(&self, r: &RegionName) -> Option<usize> {
        self.entries.iter().position(|(name, _)| name == r)
    }

    pub fn contains(&self, r: &RegionName) -> bool {
        self.get(r).is_some()
    }

    pub fn domain(&self) -> BTreeSet<RegionName> {
        self.entries.iter().map(|(r, _)| r.clone()).collect()
    }

    pub fn domain_effect(&self) -> Effect {
        self.entries.iter().map(|(r, _)| r.clone()).collect()
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> RegionContext {
        RegionContext { entries: self.entries[..n.min(self.len())].to_vec() }
    }

    /// `R, R'`
    pub fn extend(&self, other: &RegionContext) -> RegionContext {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RegionContext { entries }
    }

    /// The smallest sub-context, in original order, that contains `seed` and
    /// every region mentioned by the types of its entries.
    pub fn closure(&self, seed: &Effect) -> RegionContext {
        let mut keep: BTreeSet<RegionName> = seed.iter().filter(|r| self.contains(r)).cloned().collect();
        let mut work: Vec<RegionName> = keep.iter().cloned().collect();
        while let Some(r) = work.pop() {
            if let Some(ty) = self.get(&r) {
                for s in ty.regions() {
                    if self.contains(&s) && keep.insert(s.clone()) {
                        work.push(s);
                    }
                }
            }
        }
        RegionContext {
            entries: self.entries.iter().filter(|(r, _)| keep.contains(r)).cloned().collect(),
        }
    }

    /// Entries whose region is not in `other`.
    pub fn without(&self, other: &RegionContext) -> RegionContext {
        RegionContext {
            entries: self.entries.iter().filter(|(r, _)| !other.contains(r)).cloned().collect(),
        }
    }
}

/// `x1:A1, …, xn:An`. Later entries shadow earlier ones.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct TypingContext {
    entries: Vec<(String, Type)>,
}

impl TypingContext {
    pub fn new() -> Self {
        TypingContext::default()
    }

    pub fn with(mut self, x: impl Into<String>, ty: Type) -> Self {
        self.entries.push((x.into(), ty));
        self
    }

    pub fn get(&self, x: &str) -> Option<&Type> {
        self.entries.iter().rev().find(|(name, _)| name == x).map(|(_, ty)| ty)
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }

    pub(crate) fn push(&mut self, x: String, ty: Type) {
        self.entries.push((x, ty));
    }

    pub(crate) fn pop(&mut self) {
        self.entries.pop();
    }
}

/// A type-and-effect pair `(α, e)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TypeEffect {
    pub ty: Type,
    pub effect: Effect,
}

impl TypeEffect {
    pub fn new(ty: Type, effect: Effect) -> Self {
        TypeEffect { ty, effect }
    }

    pub fn pure(ty: Type) -> Self {
        TypeEffect { ty, effect: Effect::empty() }
    }
}

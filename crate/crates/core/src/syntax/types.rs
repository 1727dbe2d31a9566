use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A region name. Region names live in their own namespace, separate from
/// term variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionName(Arc<str>);

impl RegionName {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "region names must be nonempty");
        RegionName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for RegionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for RegionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl serde::Serialize for RegionName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl From<&str> for RegionName {
    fn from(s: &str) -> Self {
        RegionName::new(s)
    }
}

/// A finite set of regions: the regions a computation may read or write.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Effect(BTreeSet<RegionName>);

impl Effect {
    pub fn empty() -> Self {
        Effect(BTreeSet::new())
    }

    pub fn singleton(r: RegionName) -> Self {
        Effect(BTreeSet::from([r]))
    }

    pub fn contains(&self, r: &RegionName) -> bool {
        self.0.contains(r)
    }

    pub fn insert(&mut self, r: RegionName) {
        self.0.insert(r);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_subset(&self, other: &Effect) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Effect) -> Effect {
        Effect(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Effect) -> Effect {
        Effect(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn with(mut self, r: RegionName) -> Effect {
        self.0.insert(r);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = &RegionName> {
        self.0.iter()
    }
}

impl FromIterator<RegionName> for Effect {
    fn from_iter<I: IntoIterator<Item = RegionName>>(iter: I) -> Self {
        Effect(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Effect {
    type Item = &'a RegionName;
    type IntoIter = std::collections::btree_set::Iter<'a, RegionName>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

/// Types and the behaviour type.
///
/// The grammar only admits [`Type::Behaviour`] in codomain position; that
/// restriction is enforced by well-formedness, not by this enum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Type {
    Unit,
    /// Opt-in integer base type.
    Int,
    /// `Reg_r(A)`: the type of region `r`, whose stored values have type `A`.
    Reg(RegionName, Box<Type>),
    /// `A -e-> α`.
    Arrow(Box<Type>, Effect, Box<Type>),
    Behaviour,
}

impl Type {
    pub fn reg(r: impl Into<RegionName>, content: Type) -> Type {
        Type::Reg(r.into(), Box::new(content))
    }

    pub fn arrow(domain: Type, effect: Effect, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), effect, Box::new(codomain))
    }

    pub fn is_behaviour(&self) -> bool {
        matches!(self, Type::Behaviour)
    }

    /// Every region occurring in the type, in `Reg` positions or in effects.
    pub fn regions(&self) -> BTreeSet<RegionName> {
        let mut out = BTreeSet::new();
        self.collect_regions(&mut out);
        out
    }

    fn collect_regions(&self, out: &mut BTreeSet<RegionName>) {
        match self {
            Type::Unit | Type::Int | Type::Behaviour => {}
            Type::Reg(r, content) => {
                out.insert(r.clone());
                content.collect_regions(out);
            }
            Type::Arrow(dom, eff, cod) => {
                dom.collect_regions(out);
                out.extend(eff.iter().cloned());
                cod.collect_regions(out);
            }
        }
    }

    /// The type with every effect annotation removed (set to empty).
    pub fn erase(&self) -> Type {
        match self {
            Type::Unit | Type::Int | Type::Behaviour => self.clone(),
            Type::Reg(r, content) => Type::Reg(r.clone(), Box::new(content.erase())),
            Type::Arrow(dom, _, cod) => Type::arrow(dom.erase(), Effect::empty(), cod.erase()),
        }
    }
}

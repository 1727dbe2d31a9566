use std::collections::BTreeSet;

use super::types::{Effect, RegionName, Type};

/// Binary integer operators (integer extension).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    pub fn apply(self, a: i64, b: i64) -> i64 {
        match self {
            BinOp::Add => a.wrapping_add(b),
            BinOp::Sub => a.wrapping_sub(b),
            BinOp::Mul => a.wrapping_mul(b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }
}

/// Terms of the calculus.
///
/// Bound variables carry their source names; α-equivalence is decided by
/// [`Term::canonical`], which renames binders by nesting level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(String),
    Region(RegionName),
    Unit,
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Get(Box<Term>),
    Set(Box<Term>, Box<Term>),
    /// `now elsenext later`
    ElseNext(Box<Term>, Box<Term>),
    /// Parallel composition; always has at least two components.
    Par(Vec<Term>),
    Int(i64),
    BinOp(BinOp, Box<Term>, Box<Term>),
    /// Zero test: evaluates to `1` on zero and `0` otherwise.
    IsZero(Box<Term>),
    /// `ifz(c){then}{else}`
    IfZero(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Term {
        Term::Var(x.into())
    }

    pub fn region(r: impl Into<RegionName>) -> Term {
        Term::Region(r.into())
    }

    pub fn lam(x: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam(x.into(), ty, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn get(t: Term) -> Term {
        Term::Get(Box::new(t))
    }

    pub fn set(target: Term, value: Term) -> Term {
        Term::Set(Box::new(target), Box::new(value))
    }

    pub fn else_next(now: Term, later: Term) -> Term {
        Term::ElseNext(Box::new(now), Box::new(later))
    }

    /// Parallel composition. Panics on fewer than two threads.
    pub fn par(threads: Vec<Term>) -> Term {
        assert!(threads.len() >= 2, "par needs at least two threads");
        Term::Par(threads)
    }

    pub fn binop(op: BinOp, a: Term, b: Term) -> Term {
        Term::BinOp(op, Box::new(a), Box::new(b))
    }

    pub fn is_zero(t: Term) -> Term {
        Term::IsZero(Box::new(t))
    }

    pub fn if_zero(c: Term, then: Term, els: Term) -> Term {
        Term::IfZero(Box::new(c), Box::new(then), Box::new(els))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Region(_) | Term::Unit | Term::Lam(..) | Term::Int(_))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, body) => {
                bound.push(x.clone());
                body.collect_free_vars(bound, out);
                bound.pop();
            }
            _ => self.for_each_child(|c| c.collect_free_vars(bound, out)),
        }
    }

    /// Every region named by the term, as a constant or inside an annotation.
    pub fn free_regions(&self) -> Effect {
        let mut out = BTreeSet::new();
        self.collect_regions(&mut out);
        out.into_iter().collect()
    }

    fn collect_regions(&self, out: &mut BTreeSet<RegionName>) {
        match self {
            Term::Region(r) => {
                out.insert(r.clone());
            }
            Term::Lam(_, ty, body) => {
                out.extend(ty.regions());
                body.collect_regions(out);
            }
            _ => self.for_each_child(|c| c.collect_regions(out)),
        }
    }

    /// Every variable name appearing in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Lam(x, _, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
            _ => self.for_each_child(|c| c.collect_names(out)),
        }
    }

    fn for_each_child(&self, mut f: impl FnMut(&Term)) {
        match self {
            Term::Var(_) | Term::Region(_) | Term::Unit | Term::Int(_) => {}
            Term::Lam(_, _, body) => f(body),
            Term::Get(t) | Term::IsZero(t) => f(t),
            Term::App(a, b) | Term::Set(a, b) | Term::ElseNext(a, b) | Term::BinOp(_, a, b) => {
                f(a);
                f(b);
            }
            Term::IfZero(a, b, c) => {
                f(a);
                f(b);
                f(c);
            }
            Term::Par(ts) => ts.iter().for_each(f),
        }
    }

    /// Rebuild the term applying `f` to each immediate subterm. Binders are
    /// left untouched, so `f` must not be scope-sensitive.
    pub fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        match self {
            Term::Var(_) | Term::Region(_) | Term::Unit | Term::Int(_) => self.clone(),
            Term::Lam(x, ty, body) => Term::Lam(x.clone(), ty.clone(), Box::new(f(body))),
            Term::App(a, b) => Term::app(f(a), f(b)),
            Term::Get(t) => Term::get(f(t)),
            Term::Set(a, b) => Term::set(f(a), f(b)),
            Term::ElseNext(a, b) => Term::else_next(f(a), f(b)),
            Term::Par(ts) => Term::Par(ts.iter().map(f).collect()),
            Term::BinOp(op, a, b) => Term::binop(*op, f(a), f(b)),
            Term::IsZero(t) => Term::is_zero(f(t)),
            Term::IfZero(a, b, c) => Term::if_zero(f(a), f(b), f(c)),
        }
    }

    /// The α-canonical representative: binders renamed `%0`, `%1`, … by
    /// nesting depth. Free variables keep their names.
    pub fn canonical(&self) -> Term {
        self.canonical_in(&mut Vec::new())
    }

    fn canonical_in(&self, env: &mut Vec<(String, String)>) -> Term {
        match self {
            Term::Var(x) => match env.iter().rev().find(|(orig, _)| orig == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => self.clone(),
            },
            Term::Lam(x, ty, body) => {
                let fresh = format!("%{}", env.len());
                env.push((x.clone(), fresh.clone()));
                let body = body.canonical_in(env);
                env.pop();
                Term::Lam(fresh, ty.clone(), Box::new(body))
            }
            _ => self.map_children(|c| c.canonical_in(env)),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Capture-avoiding substitution `[replacement/var]self`.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        let fv = replacement.free_vars();
        self.subst_with(var, replacement, &fv)
    }

    fn subst_with(&self, var: &str, replacement: &Term, fv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(x) if x == var => replacement.clone(),
            Term::Var(_) => self.clone(),
            Term::Lam(x, _, _) if x == var => self.clone(),
            Term::Lam(x, ty, body) => {
                if fv.contains(x) {
                    let mut avoid = fv.clone();
                    avoid.extend(body.all_names());
                    avoid.insert(var.to_owned());
                    let fresh = fresh_name(x, &avoid);
                    let renamed = body.rename_free(x, &fresh);
                    Term::Lam(fresh, ty.clone(), Box::new(renamed.subst_with(var, replacement, fv)))
                } else {
                    Term::Lam(x.clone(), ty.clone(), Box::new(body.subst_with(var, replacement, fv)))
                }
            }
            _ => self.map_children(|c| c.subst_with(var, replacement, fv)),
        }
    }

    /// Rename free occurrences of `from` to `to`; `to` must not occur in the term.
    fn rename_free(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(x) if x == from => Term::Var(to.to_owned()),
            Term::Lam(x, _, _) if x == from => self.clone(),
            Term::Var(_) => self.clone(),
            Term::Lam(x, ty, body) => Term::Lam(x.clone(), ty.clone(), Box::new(body.rename_free(from, to))),
            _ => self.map_children(|c| c.rename_free(from, to)),
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        let mut n = 1;
        self.for_each_child(|c| n += c.size());
        n
    }

    pub fn contains_else_next(&self) -> bool {
        match self {
            Term::ElseNext(..) => true,
            _ => {
                let mut found = false;
                self.for_each_child(|c| found |= c.contains_else_next());
                found
            }
        }
    }
}

/// A name derived from `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|candidate| !avoid.contains(candidate))
        .expect("unbounded search")
}

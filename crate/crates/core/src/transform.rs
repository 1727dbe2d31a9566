//! The `ref` and `fix` macros and else-next elimination.
//!
//! `ref_r M` stands for `(λx:Unit.r) set(r, M)` and `fix_r f.M` for
//! `λx:A. get(ref_r(λx':A. ([λx'':A.(get r) x''/f]M) x')) x`, with every
//! introduced binder fresh for the whole term being expanded.

use std::collections::BTreeSet;

use crate::syntax::{fresh_name, BinOp, EvalContext, Frame, Program, RegionName, Store, Term, Type};

/// Core terms plus the two macro forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SurfaceTerm {
    Var(String),
    Region(RegionName),
    Unit,
    Lam(String, Type, Box<SurfaceTerm>),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Get(Box<SurfaceTerm>),
    Set(Box<SurfaceTerm>, Box<SurfaceTerm>),
    ElseNext(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Par(Vec<SurfaceTerm>),
    Int(i64),
    BinOp(BinOp, Box<SurfaceTerm>, Box<SurfaceTerm>),
    IsZero(Box<SurfaceTerm>),
    IfZero(Box<SurfaceTerm>, Box<SurfaceTerm>, Box<SurfaceTerm>),
    /// `ref[r](M)`
    Ref(RegionName, Box<SurfaceTerm>),
    /// `fix[r](f : A -{e}> B) -> M`; `ann` is always an arrow.
    Fix { region: RegionName, fun: String, ann: Type, body: Box<SurfaceTerm> },
}

impl SurfaceTerm {
    fn children(&self) -> Vec<&SurfaceTerm> {
        use SurfaceTerm::*;
        match self {
            Var(_) | Region(_) | Unit | Int(_) => vec![],
            Lam(_, _, b) | Get(b) | IsZero(b) | Ref(_, b) | Fix { body: b, .. } => vec![b],
            App(a, b) | Set(a, b) | ElseNext(a, b) | BinOp(_, a, b) => vec![a, b],
            IfZero(a, b, c) => vec![a, b, c],
            Par(ts) => ts.iter().collect(),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            SurfaceTerm::Var(x) | SurfaceTerm::Lam(x, ..) | SurfaceTerm::Fix { fun: x, .. } => {
                out.insert(x.clone());
            }
            _ => {}
        }
        self.children().into_iter().for_each(|c| c.collect_names(out));
    }

    pub fn contains_macros(&self) -> bool {
        matches!(self, SurfaceTerm::Ref(..) | SurfaceTerm::Fix { .. }) || self.children().into_iter().any(Self::contains_macros)
    }
}

impl From<&Term> for SurfaceTerm {
    fn from(t: &Term) -> Self {
        use SurfaceTerm as S;
        let b = |t: &Term| Box::new(S::from(t));
        match t {
            Term::Var(x) => S::Var(x.clone()),
            Term::Region(r) => S::Region(r.clone()),
            Term::Unit => S::Unit,
            Term::Lam(x, ty, body) => S::Lam(x.clone(), ty.clone(), b(body)),
            Term::App(f, a) => S::App(b(f), b(a)),
            Term::Get(a) => S::Get(b(a)),
            Term::Set(a, v) => S::Set(b(a), b(v)),
            Term::ElseNext(n, l) => S::ElseNext(b(n), b(l)),
            Term::Par(ts) => S::Par(ts.iter().map(S::from).collect()),
            Term::Int(n) => S::Int(*n),
            Term::BinOp(op, x, y) => S::BinOp(*op, b(x), b(y)),
            Term::IsZero(x) => S::IsZero(b(x)),
            Term::IfZero(c, x, y) => S::IfZero(b(c), b(x), b(y)),
        }
    }
}

/// Generates binder names fresh for one expansion pass.
#[derive(Clone, Debug, Default)]
pub struct Expander {
    used: BTreeSet<String>,
}

impl Expander {
    /// An expander that avoids every name in `avoid`.
    pub fn avoiding(avoid: BTreeSet<String>) -> Self {
        Expander { used: avoid }
    }

    pub fn fresh(&mut self, stem: &str) -> String {
        let name = fresh_name(stem, &self.used);
        self.used.insert(name.clone());
        name
    }

    pub fn expand(&mut self, t: &SurfaceTerm) -> Term {
        use SurfaceTerm as S;
        match t {
            S::Var(x) => Term::var(x.clone()),
            S::Region(r) => Term::Region(r.clone()),
            S::Unit => Term::Unit,
            S::Int(n) => Term::Int(*n),
            S::Lam(x, ty, body) => Term::lam(x.clone(), ty.clone(), self.expand(body)),
            S::App(f, a) => Term::app(self.expand(f), self.expand(a)),
            S::Get(a) => Term::get(self.expand(a)),
            S::Set(a, v) => Term::set(self.expand(a), self.expand(v)),
            S::ElseNext(n, l) => Term::else_next(self.expand(n), self.expand(l)),
            S::Par(ts) => Term::par(ts.iter().map(|t| self.expand(t)).collect()),
            S::BinOp(op, a, b) => Term::binop(*op, self.expand(a), self.expand(b)),
            S::IsZero(a) => Term::is_zero(self.expand(a)),
            S::IfZero(c, a, b) => Term::if_zero(self.expand(c), self.expand(a), self.expand(b)),
            S::Ref(r, m) => {
                let m = self.expand(m);
                self.expand_ref(r, m)
            }
            S::Fix { region, fun, ann, body } => {
                let m = self.expand(body);
                self.expand_fix(region, fun, ann, m)
            }
        }
    }

    pub fn expand_ref(&mut self, r: &RegionName, m: Term) -> Term {
        let x = self.fresh("x");
        Term::app(Term::lam(x, Type::Unit, Term::Region(r.clone())), Term::set(Term::Region(r.clone()), m))
    }

    /// # Panics
    /// If `ann` is not an arrow type.
    pub fn expand_fix(&mut self, r: &RegionName, f: &str, ann: &Type, m: Term) -> Term {
        let Type::Arrow(dom, _, _) = ann else { panic!("fix annotation must be an arrow, got {ann}") };
        let dom = (**dom).clone();
        self.used.extend(m.all_names());
        let (x, x1, x2) = (self.fresh("x"), self.fresh("x"), self.fresh("x"));
        let call = Term::lam(x2.clone(), dom.clone(), Term::app(Term::get(Term::Region(r.clone())), Term::var(x2)));
        let unrolled = m.substitute(f, &call);
        let stored = Term::lam(x1.clone(), dom.clone(), Term::app(unrolled, Term::var(x1)));
        let cell = self.expand_ref(r, stored);
        Term::lam(x.clone(), dom, Term::app(Term::get(cell), Term::var(x)))
    }
}

/// Expand every macro in `t`, with binders fresh for `t`.
pub fn expand(t: &SurfaceTerm) -> Term {
    Expander::avoiding(t.all_names()).expand(t)
}

pub fn expand_ref(r: &RegionName, m: &Term) -> Term {
    Expander::avoiding(m.all_names()).expand_ref(r, m.clone())
}

pub fn expand_fix(r: &RegionName, f: &str, ann: &Type, m: &Term) -> Term {
    let mut avoid = m.all_names();
    avoid.insert(f.to_string());
    Expander::avoiding(avoid).expand_fix(r, f, ann, m.clone())
}

/// `⟦·⟧`: drop every `elsenext` branch, keeping the `now` part.
pub fn translate(t: &Term) -> Term {
    match t {
        Term::ElseNext(now, _) => translate(now),
        _ => t.map_children(translate),
    }
}

pub fn translate_store(s: &Store) -> Store {
    s.map_values(translate)
}

pub fn translate_program(p: &Program) -> Program {
    p.map_terms(translate)
}

/// Translated contexts lose their else-next frames, so `⟦red(E)⟧ = ⟦E⟧`.
pub fn translate_context(ctx: &EvalContext) -> EvalContext {
    EvalContext::from_frames(
        ctx.frames.iter().filter(|f| !f.is_else_next()).map(|f: &Frame| f.map_terms(translate)).collect(),
    )
}

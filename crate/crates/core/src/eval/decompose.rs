use thiserror::Error;

use crate::syntax::{BinOp, EvalContext, Frame, RegionName, Term, Type};

/// An integer-extension redex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrimRedex {
    Bin(BinOp, i64, i64),
    IsZero(i64),
    IfZero(i64, Term, Term),
}

impl PrimRedex {
    pub fn contract(&self) -> Term {
        match self {
            PrimRedex::Bin(op, a, b) => Term::Int(op.apply(*a, *b)),
            PrimRedex::IsZero(n) => Term::Int(i64::from(*n == 0)),
            PrimRedex::IfZero(n, then, els) => {
                if *n == 0 {
                    then.clone()
                } else {
                    els.clone()
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Redex {
    /// `(λx.M) V`
    Beta { param: String, annotation: Type, body: Term, arg: Term },
    /// `get r`
    Get(RegionName),
    /// `set(r, V)`
    Set(RegionName, Term),
    Prim(PrimRedex),
}

impl Redex {
    /// The redex as a term.
    pub fn term(&self) -> Term {
        match self {
            Redex::Beta { param, annotation, body, arg } => {
                Term::app(Term::lam(param.clone(), annotation.clone(), body.clone()), arg.clone())
            }
            Redex::Get(r) => Term::get(Term::Region(r.clone())),
            Redex::Set(r, v) => Term::set(Term::Region(r.clone()), v.clone()),
            Redex::Prim(PrimRedex::Bin(op, a, b)) => Term::binop(*op, Term::Int(*a), Term::Int(*b)),
            Redex::Prim(PrimRedex::IsZero(n)) => Term::is_zero(Term::Int(*n)),
            Redex::Prim(PrimRedex::IfZero(n, a, b)) => Term::if_zero(Term::Int(*n), a.clone(), b.clone()),
        }
    }

    /// The region the redex interacts with, if any.
    pub fn region(&self) -> Option<&RegionName> {
        match self {
            Redex::Get(r) | Redex::Set(r, _) => Some(r),
            _ => None,
        }
    }
}

/// What sits in the hole under the outermost pending `elsenext`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Delta {
    Value(Term),
    Redex(Redex),
}

/// The unique decomposition of a closed, effect-free-typable thread.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decomposition {
    IsValue(Term),
    /// `E[Δ]` with `E` time-insensitive.
    Redex { ctx: EvalContext, redex: Redex },
    /// `E[(E'[Δ]) elsenext N]` with `E` time-insensitive.
    UnderElseNext { outer: EvalContext, inner: EvalContext, delta: Delta, later: Term },
}

impl Decomposition {
    /// The whole context around the redex or value.
    pub fn context(&self) -> EvalContext {
        match self {
            Decomposition::IsValue(_) => EvalContext::hole(),
            Decomposition::Redex { ctx, .. } => ctx.clone(),
            Decomposition::UnderElseNext { outer, inner, later, .. } => {
                let mut ctx = outer.clone();
                ctx.push(Frame::ElseNext(later.clone()));
                ctx.compose(inner)
            }
        }
    }

    pub fn redex(&self) -> Option<&Redex> {
        match self {
            Decomposition::Redex { redex, .. } => Some(redex),
            Decomposition::UnderElseNext { delta: Delta::Redex(redex), .. } => Some(redex),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Decomposition::IsValue(_) => "value",
            Decomposition::Redex { .. } => "redex",
            Decomposition::UnderElseNext { .. } => "under-else-next",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("cannot decompose {term}: {reason}")]
pub struct DecompositionFailure {
    pub term: String,
    pub reason: &'static str,
}

enum Focus {
    Value(Term),
    Redex(Redex),
}

fn fail(t: &Term, reason: &'static str) -> DecompositionFailure {
    DecompositionFailure { term: t.to_string(), reason }
}

fn int_of(t: &Term) -> Option<i64> {
    match t {
        Term::Int(n) => Some(*n),
        _ => None,
    }
}

/// Walk down the evaluation position of `t`, pushing frames.
fn locate(t: &Term, frames: &mut Vec<Frame>) -> Result<Focus, DecompositionFailure> {
    let mut t = t;
    loop {
        if t.is_value() {
            return Ok(Focus::Value(t.clone()));
        }
        match t {
            Term::App(f, a) => {
                if !f.is_value() {
                    frames.push(Frame::AppFun((**a).clone()));
                    t = f;
                } else if !a.is_value() {
                    frames.push(Frame::AppArg((**f).clone()));
                    t = a;
                } else if let Term::Lam(x, ann, body) = &**f {
                    return Ok(Focus::Redex(Redex::Beta {
                        param: x.clone(),
                        annotation: ann.clone(),
                        body: (**body).clone(),
                        arg: (**a).clone(),
                    }));
                } else {
                    return Err(fail(t, "application of a non-function value"));
                }
            }
            Term::Get(a) => {
                if !a.is_value() {
                    frames.push(Frame::Get);
                    t = a;
                } else if let Term::Region(r) = &**a {
                    return Ok(Focus::Redex(Redex::Get(r.clone())));
                } else {
                    return Err(fail(t, "get on a value that is not a region"));
                }
            }
            Term::Set(a, b) => {
                if !a.is_value() {
                    frames.push(Frame::SetTarget((**b).clone()));
                    t = a;
                } else if !b.is_value() {
                    frames.push(Frame::SetValue((**a).clone()));
                    t = b;
                } else if let Term::Region(r) = &**a {
                    return Ok(Focus::Redex(Redex::Set(r.clone(), (**b).clone())));
                } else {
                    return Err(fail(t, "set on a value that is not a region"));
                }
            }
            Term::ElseNext(now, later) => {
                frames.push(Frame::ElseNext((**later).clone()));
                t = now;
            }
            Term::BinOp(op, a, b) => {
                if !a.is_value() {
                    frames.push(Frame::BinLeft(*op, (**b).clone()));
                    t = a;
                } else if !b.is_value() {
                    frames.push(Frame::BinRight(*op, (**a).clone()));
                    t = b;
                } else {
                    let (Some(x), Some(y)) = (int_of(a), int_of(b)) else {
                        return Err(fail(t, "arithmetic on a non-integer"));
                    };
                    return Ok(Focus::Redex(Redex::Prim(PrimRedex::Bin(*op, x, y))));
                }
            }
            Term::IsZero(a) => {
                if !a.is_value() {
                    frames.push(Frame::IsZero);
                    t = a;
                } else {
                    let Some(n) = int_of(a) else { return Err(fail(t, "iszero on a non-integer")) };
                    return Ok(Focus::Redex(Redex::Prim(PrimRedex::IsZero(n))));
                }
            }
            Term::IfZero(c, then, els) => {
                if !c.is_value() {
                    frames.push(Frame::IfZeroCond((**then).clone(), (**els).clone()));
                    t = c;
                } else {
                    let Some(n) = int_of(c) else { return Err(fail(t, "ifz on a non-integer")) };
                    return Ok(Focus::Redex(Redex::Prim(PrimRedex::IfZero(n, (**then).clone(), (**els).clone()))));
                }
            }
            Term::Var(_) => return Err(fail(t, "free variable in evaluation position")),
            Term::Par(_) => return Err(fail(t, "parallel composition under an evaluation context")),
            Term::Region(_) | Term::Unit | Term::Lam(..) | Term::Int(_) => unreachable!("values handled above"),
        }
    }
}

/// Split a thread into evaluation context and redex (or value).
pub fn decompose(t: &Term) -> Result<Decomposition, DecompositionFailure> {
    if let Term::Par(_) = t {
        return Err(fail(t, "parallel composition is a program, not a thread"));
    }
    let mut frames = Vec::new();
    let focus = locate(t, &mut frames)?;
    match frames.iter().position(Frame::is_else_next) {
        None => match focus {
            Focus::Value(v) => {
                debug_assert!(frames.is_empty());
                Ok(Decomposition::IsValue(v))
            }
            Focus::Redex(redex) => Ok(Decomposition::Redex { ctx: EvalContext::from_frames(frames), redex }),
        },
        Some(i) => {
            let inner = frames.split_off(i + 1);
            let Some(Frame::ElseNext(later)) = frames.pop() else { unreachable!() };
            let delta = match focus {
                Focus::Value(v) => Delta::Value(v),
                Focus::Redex(r) => Delta::Redex(r),
            };
            Ok(Decomposition::UnderElseNext {
                outer: EvalContext::from_frames(frames),
                inner: EvalContext::from_frames(inner),
                delta,
                later,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> Term {
        Term::lam("x", Type::Unit, Term::var("x"))
    }

    #[test]
    fn beta_in_empty_context() {
        let d = decompose(&Term::app(id(), Term::Unit)).unwrap();
        let Decomposition::Redex { ctx, redex } = d else { panic!() };
        assert!(ctx.is_hole());
        assert!(matches!(redex, Redex::Beta { .. }));
    }

    #[test]
    fn values_decompose_as_values() {
        assert_eq!(decompose(&id()).unwrap(), Decomposition::IsValue(id()));
    }

    #[test]
    fn else_next_with_beta_inside() {
        let now = Term::app(Term::lam("x", Type::Unit, Term::Unit), Term::Unit);
        let t = Term::else_next(now, Term::var("n"));
        let Decomposition::UnderElseNext { outer, inner, delta, later } = decompose(&t).unwrap() else { panic!() };
        assert!(outer.is_hole() && inner.is_hole());
        assert!(matches!(delta, Delta::Redex(Redex::Beta { .. })));
        assert_eq!(later, Term::var("n"));
    }

    #[test]
    fn outermost_else_next_splits_context() {
        // get ((get #r elsenext a) elsenext b)
        let t = Term::get(Term::else_next(Term::else_next(Term::get(Term::region("r")), Term::var("a")), Term::var("b")));
        let Decomposition::UnderElseNext { outer, inner, delta, later } = decompose(&t).unwrap() else { panic!() };
        assert_eq!(outer.frames, vec![Frame::Get]);
        assert_eq!(inner.frames, vec![Frame::ElseNext(Term::var("a"))]);
        assert_eq!(delta, Delta::Redex(Redex::Get("r".into())));
        assert_eq!(later, Term::var("b"));
    }

    #[test]
    fn plug_inverts_decompose() {
        let t = Term::app(
            Term::get(Term::app(Term::lam("x", Type::Unit, Term::region("r")), Term::set(Term::region("r"), id()))),
            Term::Unit,
        );
        let d = decompose(&t).unwrap();
        let Decomposition::Redex { ctx, redex } = &d else { panic!() };
        assert!(matches!(redex, Redex::Set(..)));
        assert_eq!(ctx.plug(redex.term()), t);
    }

    #[test]
    fn stuck_shapes_fail() {
        assert!(decompose(&Term::app(Term::Unit, Term::Unit)).is_err());
        assert!(decompose(&Term::get(Term::Unit)).is_err());
        assert!(decompose(&Term::var("x")).is_err());
        assert!(decompose(&Term::par(vec![Term::Unit, Term::Unit])).is_err());
    }
}

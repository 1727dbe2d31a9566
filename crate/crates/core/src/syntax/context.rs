use super::term::{BinOp, Term};

/// An elementary evaluation context: one layer around the hole.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Frame {
    /// `[] M`
    AppFun(Term),
    /// `V []`
    AppArg(Term),
    /// `get []`
    Get,
    /// `set([], M)`
    SetTarget(Term),
    /// `set(V, [])`
    SetValue(Term),
    /// `[] elsenext M`
    ElseNext(Term),
    /// `[] op M`
    BinLeft(BinOp, Term),
    /// `V op []`
    BinRight(BinOp, Term),
    /// `iszero([])`
    IsZero,
    /// `ifz([]){M}{N}`
    IfZeroCond(Term, Term),
}

impl Frame {
    pub fn plug(&self, t: Term) -> Term {
        match self {
            Frame::AppFun(arg) => Term::app(t, arg.clone()),
            Frame::AppArg(fun) => Term::app(fun.clone(), t),
            Frame::Get => Term::get(t),
            Frame::SetTarget(rhs) => Term::set(t, rhs.clone()),
            Frame::SetValue(target) => Term::set(target.clone(), t),
            Frame::ElseNext(later) => Term::else_next(t, later.clone()),
            Frame::BinLeft(op, rhs) => Term::binop(*op, t, rhs.clone()),
            Frame::BinRight(op, lhs) => Term::binop(*op, lhs.clone(), t),
            Frame::IsZero => Term::is_zero(t),
            Frame::IfZeroCond(then, els) => Term::if_zero(t, then.clone(), els.clone()),
        }
    }

    pub fn is_else_next(&self) -> bool {
        matches!(self, Frame::ElseNext(_))
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Frame {
        match self {
            Frame::AppFun(t) => Frame::AppFun(f(t)),
            Frame::AppArg(t) => Frame::AppArg(f(t)),
            Frame::Get => Frame::Get,
            Frame::SetTarget(t) => Frame::SetTarget(f(t)),
            Frame::SetValue(t) => Frame::SetValue(f(t)),
            Frame::ElseNext(t) => Frame::ElseNext(f(t)),
            Frame::BinLeft(op, t) => Frame::BinLeft(*op, f(t)),
            Frame::BinRight(op, t) => Frame::BinRight(*op, f(t)),
            Frame::IsZero => Frame::IsZero,
            Frame::IfZeroCond(a, b) => Frame::IfZeroCond(f(a), f(b)),
        }
    }
}

/// An evaluation context as a stack of frames, outermost first.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct EvalContext {
    pub frames: Vec<Frame>,
}

impl EvalContext {
    pub fn hole() -> Self {
        EvalContext { frames: Vec::new() }
    }

    pub fn from_frames(frames: Vec<Frame>) -> Self {
        EvalContext { frames }
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    /// Fill the hole with `t`.
    pub fn plug(&self, t: Term) -> Term {
        self.frames.iter().rev().fold(t, |acc, frame| frame.plug(acc))
    }

    /// Drop every pending else-next frame, keeping the others in order.
    pub fn red(&self) -> EvalContext {
        EvalContext {
            frames: self.frames.iter().filter(|f| !f.is_else_next()).cloned().collect(),
        }
    }

    /// True iff the context holds no else-next frame.
    pub fn is_time_insensitive(&self) -> bool {
        !self.frames.iter().any(Frame::is_else_next)
    }

    /// `self[inner[]]`
    pub fn compose(&self, inner: &EvalContext) -> EvalContext {
        let mut frames = self.frames.clone();
        frames.extend(inner.frames.iter().cloned());
        EvalContext { frames }
    }

    pub fn push(&mut self, frame: Frame) {
        self.frames.push(frame);
    }
}

//! Concrete-syntax rendering of types, terms, stores, and programs.
//!
//! Output is accepted by the parser, so `parse(print(x))` is α-equal to `x`.

use std::fmt::{self, Display, Write};

use crate::syntax::{BinOp, Effect, Program, Store, Term, Type};
use crate::typing::{RegionContext, TypeEffect};

/// Renders types; with a region context, `Reg[r]` omits its content when it
/// matches the declaration of `r`.
#[derive(Clone, Copy, Default)]
pub struct TypePrinter<'a> {
    pub regions: Option<&'a RegionContext>,
}

impl TypePrinter<'_> {
    pub fn render(&self, ty: &Type) -> String {
        let mut out = String::new();
        self.write(&mut out, ty, false).expect("writing to a String");
        out
    }

    fn write(&self, out: &mut impl Write, ty: &Type, in_domain: bool) -> fmt::Result {
        match ty {
            Type::Unit => out.write_str("Unit"),
            Type::Int => out.write_str("Int"),
            Type::Behaviour => out.write_str("Beh"),
            Type::Reg(r, content) => {
                write!(out, "Reg[{r}]")?;
                let implied = self.regions.and_then(|rc| rc.get(r)).is_some_and(|d| d == content.as_ref());
                if !implied {
                    out.write_str("(")?;
                    self.write(out, content, false)?;
                    out.write_str(")")?;
                }
                Ok(())
            }
            Type::Arrow(dom, eff, cod) => {
                if in_domain {
                    out.write_str("(")?;
                }
                self.write(out, dom, true)?;
                write!(out, " -{eff}> ")?;
                self.write(out, cod, false)?;
                if in_domain {
                    out.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TypePrinter::default().write(f, self, false)
    }
}

impl Display for TypeEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ty, self.effect)
    }
}

/// Precedence levels, loosest first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Term,
    Sum,
    Product,
    App,
    Atom,
}

/// Renders terms with the minimum of parentheses.
#[derive(Clone, Copy, Default)]
pub struct TermPrinter<'a> {
    pub types: TypePrinter<'a>,
}

impl<'a> TermPrinter<'a> {
    pub fn new(regions: Option<&'a RegionContext>) -> Self {
        TermPrinter { types: TypePrinter { regions } }
    }

    pub fn render(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write(&mut out, t, Level::Term).expect("writing to a String");
        out
    }

    fn write(&self, out: &mut impl Write, t: &Term, level: Level) -> fmt::Result {
        let needed = match t {
            Term::Lam(..) | Term::ElseNext(..) => Level::Term,
            Term::BinOp(BinOp::Add | BinOp::Sub, ..) => Level::Sum,
            Term::BinOp(BinOp::Mul, ..) => Level::Product,
            Term::App(..) => Level::App,
            Term::Int(n) if *n < 0 => Level::Term,
            _ => Level::Atom,
        };
        let parens = level > needed;
        if parens {
            out.write_str("(")?;
        }
        match t {
            Term::Var(x) => out.write_str(x)?,
            Term::Region(r) => write!(out, "#{r}")?,
            Term::Unit => out.write_str("unit")?,
            Term::Int(n) => write!(out, "{n}")?,
            Term::Lam(x, ty, body) => {
                write!(out, "fun ({x}:{}) -> ", self.types.render(ty))?;
                self.write(out, body, Level::Term)?;
            }
            Term::App(f, a) => {
                self.write(out, f, Level::App)?;
                out.write_str(" ")?;
                self.write(out, a, Level::Atom)?;
            }
            Term::Get(a) => {
                out.write_str("get ")?;
                self.write(out, a, Level::Atom)?;
            }
            Term::Set(a, b) => {
                out.write_str("set(")?;
                self.write(out, a, Level::Term)?;
                out.write_str(", ")?;
                self.write(out, b, Level::Term)?;
                out.write_str(")")?;
            }
            Term::ElseNext(now, later) => {
                self.write(out, now, Level::Sum)?;
                out.write_str(" elsenext ")?;
                self.write(out, later, Level::Term)?;
            }
            Term::Par(ts) => {
                out.write_str("par{")?;
                for (i, th) in ts.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    self.write(out, th, Level::Term)?;
                }
                out.write_str("}")?;
            }
            Term::BinOp(op, a, b) => {
                let (lhs, rhs) = match op {
                    BinOp::Add | BinOp::Sub => (Level::Sum, Level::Product),
                    BinOp::Mul => (Level::Product, Level::App),
                };
                self.write(out, a, lhs)?;
                write!(out, " {} ", op.symbol())?;
                self.write(out, b, rhs)?;
            }
            Term::IsZero(a) => {
                out.write_str("iszero(")?;
                self.write(out, a, Level::Term)?;
                out.write_str(")")?;
            }
            Term::IfZero(c, a, b) => {
                out.write_str("ifz(")?;
                self.write(out, c, Level::Term)?;
                out.write_str("){")?;
                self.write(out, a, Level::Term)?;
                out.write_str("}{")?;
                self.write(out, b, Level::Term)?;
                out.write_str("}")?;
            }
        }
        if parens {
            out.write_str(")")?;
        }
        Ok(())
    }

    pub fn render_store(&self, store: &Store) -> String {
        let mut lines = Vec::new();
        for (r, vals) in store_groups(store) {
            let vals: Vec<String> = vals.iter().map(|v| self.render(v)).collect();
            lines.push(format!("{r} <= {{{}}}", vals.join(", ")));
        }
        lines.join("\n")
    }
}

fn store_groups(store: &Store) -> Vec<(String, Vec<Term>)> {
    let mut groups: Vec<(String, Vec<Term>)> = Vec::new();
    for (r, v) in store.iter() {
        match groups.last_mut() {
            Some((name, vals)) if name == r.as_str() => vals.push(v.clone()),
            _ => groups.push((r.to_string(), vec![v.clone()])),
        }
    }
    groups
}

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TermPrinter::default().write(f, self, Level::Term)
    }
}

impl Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups = store_groups(self);
        for (i, (r, vals)) in groups.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r} <= {{")?;
            for (j, v) in vals.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, th) in self.threads.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}", th.term)?;
        }
        if !self.store.is_empty() {
            write!(f, " || {}", self.store)?;
        }
        Ok(())
    }
}

/// `{r,s}` rendered as used inside arrow types.
pub fn render_effect(e: &Effect) -> String {
    e.to_string()
}

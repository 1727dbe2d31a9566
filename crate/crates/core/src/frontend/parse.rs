//! Lexer and recursive-descent parser for `.str` files.
//!
//! Region declarations are read in a first pass so that `Reg[r]` may omit
//! its content anywhere in the file, including in earlier declarations.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{BinOp, Effect, RegionName, Span, Type};
use crate::transform::SurfaceTerm;

const KEYWORDS: &[&str] = &[
    "fun", "get", "set", "elsenext", "par", "ref", "fix", "unit", "ifz", "iszero", "region", "def", "store", "main",
    "Unit", "Int", "Reg", "Beh",
];

const SYMBOLS: &[&str] = &["->", "<=", "(", ")", "{", "}", "[", "]", ",", ";", ":", "=", "|", "-", "+", "*", ">"];

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Kw(&'static str),
    Region(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(x) => write!(f, "identifier `{x}`"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::Region(r) => write!(f, "region `#{r}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug, Error, Serialize)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: String,
}

impl ParseError {
    fn at(span: Span, expected: &[&str], found: impl fmt::Display, message: Option<String>) -> Self {
        let found = found.to_string();
        let message = message.unwrap_or_else(|| match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        });
        ParseError {
            line: span.line,
            column: span.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
            message,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let start = Span::new(line, col, 0);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if is_ident_start(c) {
            let len = chars[i..].iter().take_while(|c| is_ident_char(**c)).count();
            let word: String = chars[i..i + len].iter().collect();
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => (Tok::Kw(k), len),
                None => (Tok::Ident(word), len),
            }
        } else if c == '#' {
            let len = chars[i + 1..].iter().take_while(|c| is_ident_char(**c)).count();
            if len == 0 || !is_ident_start(chars[i + 1]) {
                return Err(ParseError::at(start, &["region name"], "`#`", Some("expected a region name after `#`".into())));
            }
            (Tok::Region(chars[i + 1..i + 1 + len].iter().collect()), len + 1)
        } else if c.is_ascii_digit() {
            let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            let digits: String = chars[i..i + len].iter().collect();
            let n = digits.parse::<i64>().map_err(|_| {
                ParseError::at(start, &[], format!("`{digits}`"), Some(format!("integer literal {digits} is out of range")))
            })?;
            (Tok::Int(n), len)
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => (Tok::Sym(s), s.len()),
                None => return Err(ParseError::at(start, &[], format!("character `{c}`"), None)),
            }
        };
        out.push(Token { tok, span: Span::new(line, col, len) });
        advance(len, &mut i, &mut col);
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(line, col, 0) });
    Ok(out)
}

/// Types as written: `Reg[r]` may leave its content implicit.
#[derive(Clone, Debug)]
enum TypeSyntax {
    Unit,
    Int,
    Beh,
    Reg(RegionName, Option<Box<TypeSyntax>>, Span),
    Arrow(Box<TypeSyntax>, Effect, Box<TypeSyntax>),
}

#[derive(Clone, Debug)]
pub struct Def {
    pub name: String,
    pub body: SurfaceTerm,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct StoreDecl {
    pub region: RegionName,
    pub values: Vec<SurfaceTerm>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct MainDecl {
    pub threads: Vec<SurfaceTerm>,
    pub span: Span,
}

/// A parsed file, before macro expansion.
#[derive(Clone, Debug, Default)]
pub struct ParsedFile {
    /// Contents of `//!` header lines, without the marker.
    pub headers: Vec<String>,
    pub prelude_int: bool,
    pub regions: Vec<(RegionName, Type, Span)>,
    pub defs: Vec<Def>,
    pub stores: Vec<StoreDecl>,
    pub main: Option<MainDecl>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Enable integers regardless of the file's own `//! prelude: int`.
    pub prelude_int: bool,
}

/// `//!` header lines of a source text.
pub fn headers(src: &str) -> Vec<String> {
    src.lines().filter_map(|l| l.trim_start().strip_prefix("//!")).map(|h| h.trim().to_string()).collect()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    ints: bool,
    regions: HashMap<RegionName, Type>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::at(self.span(), expected, self.peek(), None))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Kw(t) if *t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(&[&format!("`{s}`")])
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            _ => self.error(&[what]),
        }
    }

    fn require_ints(&self, what: &str) -> Result<(), ParseError> {
        if self.ints {
            Ok(())
        } else {
            Err(ParseError::at(
                self.span(),
                &[],
                self.peek(),
                Some(format!("{what} requires the integer prelude (`//! prelude: int` or --prelude=int)")),
            ))
        }
    }

    // ---- types ----

    fn type_syntax(&mut self) -> Result<TypeSyntax, ParseError> {
        let dom = self.type_atom()?;
        if self.is_sym("-") && matches!(self.toks[self.pos + 1].tok, Tok::Sym("{")) {
            self.bump();
            self.bump();
            let mut effect = Effect::empty();
            if !self.is_sym("}") {
                loop {
                    effect.insert(RegionName::new(self.ident("region name")?));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.sym("}")?;
            self.sym(">")?;
            let cod = self.type_syntax()?;
            return Ok(TypeSyntax::Arrow(Box::new(dom), effect, Box::new(cod)));
        }
        Ok(dom)
    }

    fn type_atom(&mut self) -> Result<TypeSyntax, ParseError> {
        match self.peek() {
            Tok::Kw("Unit") => {
                self.bump();
                Ok(TypeSyntax::Unit)
            }
            Tok::Kw("Int") => {
                self.require_ints("type `Int`")?;
                self.bump();
                Ok(TypeSyntax::Int)
            }
            Tok::Kw("Beh") => {
                self.bump();
                Ok(TypeSyntax::Beh)
            }
            Tok::Kw("Reg") => {
                self.bump();
                self.sym("[")?;
                let span = self.span();
                let r = RegionName::new(self.ident("region name")?);
                self.sym("]")?;
                let content = if self.eat_sym("(") {
                    let c = self.type_syntax()?;
                    self.sym(")")?;
                    Some(Box::new(c))
                } else {
                    None
                };
                Ok(TypeSyntax::Reg(r, content, span))
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.type_syntax()?;
                self.sym(")")?;
                Ok(t)
            }
            _ => self.error(&["type"]),
        }
    }

    fn resolve(&self, ts: &TypeSyntax) -> Result<Type, ParseError> {
        Ok(match ts {
            TypeSyntax::Unit => Type::Unit,
            TypeSyntax::Int => Type::Int,
            TypeSyntax::Beh => Type::Behaviour,
            TypeSyntax::Reg(r, Some(c), _) => Type::reg(r.clone(), self.resolve(c)?),
            TypeSyntax::Reg(r, None, span) => match self.regions.get(r) {
                Some(t) => Type::reg(r.clone(), t.clone()),
                None => {
                    return Err(ParseError::at(
                        *span,
                        &[],
                        format!("`Reg[{r}]`"),
                        Some(format!("region {r} is not declared, so Reg[{r}] needs an explicit content type")),
                    ))
                }
            },
            TypeSyntax::Arrow(d, e, c) => Type::arrow(self.resolve(d)?, e.clone(), self.resolve(c)?),
        })
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let ts = self.type_syntax()?;
        self.resolve(&ts)
    }

    // ---- terms ----

    fn term(&mut self) -> Result<SurfaceTerm, ParseError> {
        if self.is_kw("fun") {
            self.bump();
            self.sym("(")?;
            let x = self.ident("parameter name")?;
            self.sym(":")?;
            let ty = self.ty()?;
            self.sym(")")?;
            self.sym("->")?;
            let body = self.term()?;
            return Ok(SurfaceTerm::Lam(x, ty, Box::new(body)));
        }
        if self.is_kw("fix") {
            self.bump();
            self.sym("[")?;
            let region = RegionName::new(self.ident("region name")?);
            self.sym("]")?;
            self.sym("(")?;
            let fun = self.ident("function name")?;
            self.sym(":")?;
            let span = self.span();
            let ann = self.ty()?;
            if !matches!(ann, Type::Arrow(..)) {
                return Err(ParseError::at(span, &["arrow type"], &ann, Some(format!("fix needs an arrow annotation, found {ann}"))));
            }
            self.sym(")")?;
            self.sym("->")?;
            let body = self.term()?;
            return Ok(SurfaceTerm::Fix { region, fun, ann, body: Box::new(body) });
        }
        let now = self.sum()?;
        if self.is_kw("elsenext") {
            self.bump();
            let later = self.term()?;
            return Ok(SurfaceTerm::ElseNext(Box::new(now), Box::new(later)));
        }
        Ok(now)
    }

    fn sum(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("+") => BinOp::Add,
                Tok::Sym("-") => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.require_ints("arithmetic")?;
            self.bump();
            let rhs = self.product()?;
            lhs = SurfaceTerm::BinOp(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut lhs = self.app()?;
        while self.is_sym("*") {
            self.require_ints("arithmetic")?;
            self.bump();
            let rhs = self.app()?;
            lhs = SurfaceTerm::BinOp(BinOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::Region(_)
                | Tok::Int(_)
                | Tok::Sym("(")
                | Tok::Kw("unit" | "get" | "set" | "par" | "ref" | "iszero" | "ifz")
        )
    }

    fn app(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut f = if self.is_sym("-") && matches!(self.toks[self.pos + 1].tok, Tok::Int(_)) {
            self.require_ints("a negative literal")?;
            self.bump();
            let Tok::Int(n) = self.bump() else { unreachable!() };
            SurfaceTerm::Int(-n)
        } else {
            self.atom()?
        };
        while self.starts_atom() {
            let a = self.atom()?;
            f = SurfaceTerm::App(Box::new(f), Box::new(a));
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<SurfaceTerm, ParseError> {
        let t = match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                SurfaceTerm::Var(x)
            }
            Tok::Region(r) => {
                self.bump();
                SurfaceTerm::Region(RegionName::new(r))
            }
            Tok::Int(n) => {
                self.require_ints("an integer literal")?;
                self.bump();
                SurfaceTerm::Int(n)
            }
            Tok::Kw("unit") => {
                self.bump();
                SurfaceTerm::Unit
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.sym(")")?;
                t
            }
            Tok::Kw("get") => {
                self.bump();
                SurfaceTerm::Get(Box::new(self.atom()?))
            }
            Tok::Kw("set") => {
                self.bump();
                self.sym("(")?;
                let a = self.term()?;
                self.sym(",")?;
                let v = self.term()?;
                self.sym(")")?;
                SurfaceTerm::Set(Box::new(a), Box::new(v))
            }
            Tok::Kw("par") => {
                self.bump();
                let span = self.span();
                self.sym("{")?;
                let mut ts = vec![self.term()?];
                while self.eat_sym(",") {
                    ts.push(self.term()?);
                }
                self.sym("}")?;
                if ts.len() < 2 {
                    return Err(ParseError::at(span, &["`,`"], "`}`", Some("par needs at least two threads".into())));
                }
                SurfaceTerm::Par(ts)
            }
            Tok::Kw("ref") => {
                self.bump();
                self.sym("[")?;
                let r = RegionName::new(self.ident("region name")?);
                self.sym("]")?;
                self.sym("(")?;
                let m = self.term()?;
                self.sym(")")?;
                SurfaceTerm::Ref(r, Box::new(m))
            }
            Tok::Kw("iszero") => {
                self.require_ints("iszero")?;
                self.bump();
                self.sym("(")?;
                let m = self.term()?;
                self.sym(")")?;
                SurfaceTerm::IsZero(Box::new(m))
            }
            Tok::Kw("ifz") => {
                self.require_ints("ifz")?;
                self.bump();
                self.sym("(")?;
                let c = self.term()?;
                self.sym(")")?;
                self.sym("{")?;
                let a = self.term()?;
                self.sym("}")?;
                self.sym("{")?;
                let b = self.term()?;
                self.sym("}")?;
                SurfaceTerm::IfZero(Box::new(c), Box::new(a), Box::new(b))
            }
            _ => return self.error(&["term"]),
        };
        Ok(t)
    }

    // ---- items ----

    fn skip_item(&mut self) {
        while !matches!(self.peek(), Tok::Sym(";") | Tok::Eof) {
            self.bump();
        }
        self.bump();
    }

    /// First pass: region declarations only.
    fn region_decls(&mut self) -> Result<Vec<(RegionName, TypeSyntax, Span)>, ParseError> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            if self.is_kw("region") {
                let span = self.span();
                self.bump();
                let r = RegionName::new(self.ident("region name")?);
                self.sym(":")?;
                let ts = self.type_syntax()?;
                self.sym(";")?;
                out.push((r, ts, span));
            } else {
                self.skip_item();
            }
        }
        Ok(out)
    }

    fn resolve_regions(&mut self, decls: &[(RegionName, TypeSyntax, Span)]) -> Result<(), ParseError> {
        let by_name: HashMap<&RegionName, &TypeSyntax> = decls.iter().map(|(r, t, _)| (r, t)).collect();
        for (r, _, span) in decls {
            let mut visiting = Vec::new();
            self.resolve_region(r, &by_name, &mut visiting, *span)?;
        }
        Ok(())
    }

    fn resolve_region(
        &mut self,
        r: &RegionName,
        by_name: &HashMap<&RegionName, &TypeSyntax>,
        visiting: &mut Vec<RegionName>,
        span: Span,
    ) -> Result<(), ParseError> {
        if self.regions.contains_key(r) {
            return Ok(());
        }
        if visiting.contains(r) {
            let path: Vec<String> = visiting.iter().map(ToString::to_string).collect();
            return Err(ParseError::at(
                span,
                &[],
                format!("`Reg[{r}]`"),
                Some(format!("implicit region contents form a cycle: {} -> {r}", path.join(" -> "))),
            ));
        }
        visiting.push(r.clone());
        let ts = by_name[r];
        let mut deps = Vec::new();
        implicit_regions(ts, &mut deps);
        for d in deps {
            if by_name.contains_key(&d) {
                self.resolve_region(&d, by_name, visiting, span)?;
            }
        }
        let ty = self.resolve(ts)?;
        self.regions.insert(r.clone(), ty);
        visiting.pop();
        Ok(())
    }

    fn file(&mut self, parsed: &mut ParsedFile) -> Result<(), ParseError> {
        while *self.peek() != Tok::Eof {
            let span = self.span();
            match self.peek() {
                Tok::Kw("region") => {
                    self.bump();
                    let r = RegionName::new(self.ident("region name")?);
                    self.sym(":")?;
                    let ty = self.ty()?;
                    self.sym(";")?;
                    parsed.regions.push((r, ty, span));
                }
                Tok::Kw("def") => {
                    self.bump();
                    let name = self.ident("definition name")?;
                    self.sym("=")?;
                    let body = self.term()?;
                    self.sym(";")?;
                    parsed.defs.push(Def { name, body, span });
                }
                Tok::Kw("store") => {
                    self.bump();
                    let region = RegionName::new(self.ident("region name")?);
                    self.sym("<=")?;
                    self.sym("{")?;
                    let mut values = Vec::new();
                    if !self.is_sym("}") {
                        values.push(self.term()?);
                        while self.eat_sym(",") {
                            values.push(self.term()?);
                        }
                    }
                    self.sym("}")?;
                    self.sym(";")?;
                    parsed.stores.push(StoreDecl { region, values, span });
                }
                Tok::Kw("main") => {
                    if parsed.main.is_some() {
                        return Err(ParseError::at(span, &[], "`main`", Some("main is declared twice".into())));
                    }
                    self.bump();
                    self.sym("=")?;
                    let mut threads = vec![self.term()?];
                    while self.eat_sym("|") {
                        threads.push(self.term()?);
                    }
                    self.sym(";")?;
                    parsed.main = Some(MainDecl { threads, span });
                }
                _ => return self.error(&["`region`", "`def`", "`store`", "`main`"]),
            }
        }
        Ok(())
    }
}

fn implicit_regions(ts: &TypeSyntax, out: &mut Vec<RegionName>) {
    match ts {
        TypeSyntax::Reg(r, None, _) => out.push(r.clone()),
        TypeSyntax::Reg(_, Some(c), _) => implicit_regions(c, out),
        TypeSyntax::Arrow(d, _, c) => {
            implicit_regions(d, out);
            implicit_regions(c, out);
        }
        _ => {}
    }
}

fn parser(src: &str, ints: bool) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(src)?, pos: 0, ints, regions: HashMap::new() })
}

/// Parse a whole file.
pub fn parse_file(src: &str, opts: ParseOptions) -> Result<ParsedFile, ParseError> {
    let headers = headers(src);
    let prelude_int = opts.prelude_int || headers.iter().any(|h| h.replace(' ', "") == "prelude:int");
    let mut p = parser(src, prelude_int)?;
    let decls = p.region_decls()?;
    p.resolve_regions(&decls)?;
    p.pos = 0;
    let mut parsed = ParsedFile { headers, prelude_int, ..ParsedFile::default() };
    p.file(&mut parsed)?;
    Ok(parsed)
}

fn finish<T>(p: &mut Parser, v: T) -> Result<T, ParseError> {
    if *p.peek() == Tok::Eof {
        Ok(v)
    } else {
        p.error(&["end of input"])
    }
}

/// Parse a single term; `regions` resolves bare `Reg[r]` annotations.
pub fn parse_term(src: &str, regions: &[(RegionName, Type)], prelude_int: bool) -> Result<SurfaceTerm, ParseError> {
    let mut p = parser(src, prelude_int)?;
    p.regions = regions.iter().cloned().collect();
    let t = p.term()?;
    finish(&mut p, t)
}

pub fn parse_type(src: &str, regions: &[(RegionName, Type)], prelude_int: bool) -> Result<Type, ParseError> {
    let mut p = parser(src, prelude_int)?;
    p.regions = regions.iter().cloned().collect();
    let t = p.ty()?;
    finish(&mut p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;
    use crate::transform::expand;

    fn term(src: &str) -> Term {
        expand(&parse_term(src, &[], true).unwrap())
    }

    #[test]
    fn lambda_round_trips() {
        let t = term("fun (x:Unit) -> x");
        assert_eq!(t, Term::lam("x", Type::Unit, Term::var("x")));
        assert_eq!(term(&t.to_string()), t);
    }

    #[test]
    fn empty_effect_arrow() {
        let t = parse_type("Unit -{}> Unit", &[], false).unwrap();
        assert_eq!(t, Type::arrow(Type::Unit, Effect::empty(), Type::Unit));
        let nested = parse_type("(Unit -{r}> Unit) -{}> Unit -{s}> Unit", &[], false).unwrap();
        assert_eq!(nested.to_string(), "(Unit -{r}> Unit) -{}> Unit -{s}> Unit");
    }

    #[test]
    fn divergence_file() {
        let src = "region r : Unit -{r}> Unit;\nmain = get (ref[r](fun (x:Unit) -> (get #r) x)) unit;\n";
        let f = parse_file(src, ParseOptions::default()).unwrap();
        assert_eq!(f.regions.len(), 1);
        assert_eq!(f.main.unwrap().threads.len(), 1);
    }

    #[test]
    fn precedence() {
        assert_eq!(term("f x elsenext y"), Term::else_next(Term::app(Term::var("f"), Term::var("x")), Term::var("y")));
        assert_eq!(term("a elsenext b elsenext c"), Term::else_next(Term::var("a"), Term::else_next(Term::var("b"), Term::var("c"))));
        assert_eq!(term("get #r x"), Term::app(Term::get(Term::region("r")), Term::var("x")));
        assert_eq!(term("x - 1 - 2").to_string(), "x - 1 - 2");
        assert_eq!(term("x * (y - 1)").to_string(), "x * (y - 1)");
        assert_eq!(term("-3"), Term::Int(-3));
        assert_eq!(term("f (-3)"), Term::app(Term::var("f"), Term::Int(-3)));
    }

    #[test]
    fn implicit_region_contents() {
        let src = "region s : Reg[r];\nregion r : Unit;\nmain = unit;";
        let f = parse_file(src, ParseOptions::default()).unwrap();
        assert_eq!(f.regions[0].1, Type::reg("r", Type::Unit));
        let cyclic = parse_file("region r : Reg[r];\nmain = unit;", ParseOptions::default()).unwrap_err();
        assert!(cyclic.message.contains("cycle"), "{cyclic}");
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = parse_file("region r : Unit;\nmain = set(#r, unit;", ParseOptions::default()).unwrap_err();
        assert_eq!((err.line, err.column), (2, 20));
        assert_eq!(err.expected, vec!["`)`"]);
        let ints = parse_file("main = 1;", ParseOptions::default()).unwrap_err();
        assert!(ints.message.contains("prelude"));
        assert!(parse_file("//! prelude: int\nmain = 1 + 2;", ParseOptions::default()).is_ok());
    }

    #[test]
    fn primes_in_names() {
        let f = parse_file("region r' : Unit;\nmain = set(#r', unit);", ParseOptions::default()).unwrap();
        assert_eq!(f.regions[0].0, RegionName::new("r'"));
    }
}

//! Source files after macro expansion: region context, store, and threads.

use std::collections::BTreeSet;

use thiserror::Error;

use super::parse::{parse_file, ParseError, ParseOptions, ParsedFile};
use super::print::TermPrinter;
use crate::syntax::{Effect, Program, RegionName, Span, Store, Term, Type};
use crate::transform::{Expander, SurfaceTerm};
use crate::typing::{Checker, RegionContext, SystemMode, TypeEffect, TypeError, TypingContext};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SourceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the file declares no `main`")]
    NoMain,
    #[error("{span}: store value for region {region} is not a value: {value}")]
    NotAValue { region: RegionName, value: String, span: Span },
}

#[derive(Clone, Debug)]
pub struct SourceFile {
    pub headers: Vec<String>,
    pub prelude_int: bool,
    pub regions: RegionContext,
    pub region_spans: Vec<Span>,
    /// Definitions with earlier definitions substituted in.
    pub defs: Vec<(String, Term, Span)>,
    pub stores: Vec<(RegionName, Vec<Term>, Span)>,
    pub threads: Vec<Term>,
    pub main_span: Span,
}

fn all_surface_names(parsed: &ParsedFile) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    let mut add = |t: &SurfaceTerm| names.extend(t.all_names());
    parsed.defs.iter().for_each(|d| add(&d.body));
    parsed.stores.iter().flat_map(|s| &s.values).for_each(&mut add);
    parsed.main.iter().flat_map(|m| &m.threads).for_each(&mut add);
    names.extend(parsed.defs.iter().map(|d| d.name.clone()));
    names
}

impl SourceFile {
    pub fn parse(src: &str, opts: ParseOptions) -> Result<SourceFile, SourceError> {
        Self::from_parsed(parse_file(src, opts)?)
    }

    pub fn from_parsed(parsed: ParsedFile) -> Result<SourceFile, SourceError> {
        let main = parsed.main.clone().ok_or(SourceError::NoMain)?;
        let mut ex = Expander::avoiding(all_surface_names(&parsed));
        let mut defs: Vec<(String, Term, Span)> = Vec::new();
        let inline = |t: Term, defs: &[(String, Term, Span)]| {
            defs.iter().rev().fold(t, |t, (name, body, _)| t.substitute(name, body))
        };
        for d in &parsed.defs {
            let body = inline(ex.expand(&d.body), &defs);
            defs.push((d.name.clone(), body, d.span));
        }
        let mut stores = Vec::new();
        for s in &parsed.stores {
            let mut values = Vec::new();
            for v in &s.values {
                let v = inline(ex.expand(v), &defs);
                if !v.is_value() {
                    return Err(SourceError::NotAValue { region: s.region.clone(), value: v.to_string(), span: s.span });
                }
                values.push(v);
            }
            stores.push((s.region.clone(), values, s.span));
        }
        let threads = main.threads.iter().map(|t| inline(ex.expand(t), &defs)).collect();
        Ok(SourceFile {
            headers: parsed.headers,
            prelude_int: parsed.prelude_int,
            regions: RegionContext::from_entries(parsed.regions.iter().map(|(r, t, _)| (r.clone(), t.clone())).collect()),
            region_spans: parsed.regions.iter().map(|(_, _, s)| *s).collect(),
            defs,
            stores,
            threads,
            main_span: main.span,
        })
    }

    pub fn store(&self) -> Store {
        let mut s = Store::new();
        for (r, vs, _) in &self.stores {
            for v in vs {
                s.insert(r.clone(), v.clone());
            }
        }
        s
    }

    pub fn program(&self) -> Program {
        Program::new(self.threads.clone(), self.store())
    }

    /// The span of the last declaration of `r`.
    fn region_span(&self, r: &RegionName) -> Option<Span> {
        self.regions.entries().iter().zip(&self.region_spans).filter(|((name, _), _)| name == r).map(|(_, s)| *s).last()
    }

    /// Type the whole file. A single thread with no store reports its own
    /// pair; otherwise the program judgement `(Beh, e)`.
    pub fn check(&self, mode: SystemMode, subsumption: bool) -> Result<TypeEffect, TypeError> {
        let checker = Checker::new(&self.regions, mode).map_err(|e| match e.region.as_ref().and_then(|r| self.region_span(r)) {
            Some(span) => e.at(span),
            None => e,
        })?;
        let checker = if subsumption { checker } else { checker.without_subsumption() };
        let gamma = TypingContext::new();
        for (_, body, span) in &self.defs {
            checker.synth(&gamma, body).map_err(|e| e.at(*span))?;
        }
        for (r, values, span) in &self.stores {
            let mut s = Store::new();
            values.iter().for_each(|v| {
                s.insert(r.clone(), v.clone());
            });
            checker.check_store(&gamma, &s).map_err(|e| e.at(*span))?;
        }
        let mut pairs = Vec::new();
        for t in &self.threads {
            pairs.push(checker.synth(&gamma, t).map_err(|e| e.at(self.main_span))?);
        }
        if pairs.len() == 1 && self.stores.is_empty() {
            return Ok(pairs.pop().expect("one thread"));
        }
        let effect = pairs.iter().fold(Effect::empty(), |e, p| e.union(&p.effect));
        Ok(TypeEffect::new(Type::Behaviour, effect))
    }

    /// Apply `f` to every term, as `translate` does.
    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> SourceFile {
        let mut out = self.clone();
        out.defs.iter_mut().for_each(|(_, t, _)| *t = f(t));
        out.stores.iter_mut().for_each(|(_, vs, _)| vs.iter_mut().for_each(|v| *v = f(v)));
        out.threads.iter_mut().for_each(|t| *t = f(t));
        out
    }

    /// Core syntax with definitions inlined; parses back to an α-equal file.
    pub fn render(&self) -> String {
        let printer = TermPrinter::new(Some(&self.regions));
        let mut out = String::new();
        for h in &self.headers {
            out.push_str(&format!("//! {h}\n"));
        }
        for (r, ty) in self.regions.entries() {
            out.push_str(&format!("region {r} : {};\n", printer.types.render(ty)));
        }
        for (r, vs, _) in &self.stores {
            let vs: Vec<String> = vs.iter().map(|v| printer.render(v)).collect();
            out.push_str(&format!("store {r} <= {{{}}};\n", vs.join(", ")));
        }
        let threads: Vec<String> = self.threads.iter().map(|t| printer.render(t)).collect();
        out.push_str(&format!("main = {};\n", threads.join("\n     | ")));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::TypeErrorKind;

    const DIVERGE: &str = "region r : Unit -{r}> Unit;\nmain = get (ref[r](fun (x:Unit) -> (get #r) x)) unit;\n";

    #[test]
    fn divergence_checks_unstratified_only() {
        let f = SourceFile::parse(DIVERGE, ParseOptions::default()).unwrap();
        let te = f.check(SystemMode::Unstratified, true).unwrap();
        assert_eq!(te.to_string(), "(Unit, {r})");
        let err = f.check(SystemMode::Stratified, true).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::StratificationViolation);
        assert_eq!(err.span, Some(Span::new(1, 1, 6)));
    }

    #[test]
    fn render_round_trips() {
        let src = "//! prelude: int\nregion s : Int;\nregion r : Reg[s] -{s}> Unit;\ndef w = fun (x:Reg[s]) -> set(x, 1 + 2);\nstore r <= {w};\nmain = get #r #s | w #s elsenext unit;\n";
        let f = SourceFile::parse(src, ParseOptions::default()).unwrap();
        let again = SourceFile::parse(&f.render(), ParseOptions::default()).unwrap();
        assert!(f.program().alpha_eq(&again.program()));
        assert_eq!(f.regions, again.regions);
        assert!(f.render().contains("region r : Reg[s] -{s}> Unit;"));
    }

    #[test]
    fn defs_are_inlined_and_checked_at_their_span() {
        let src = "region r : Unit;\ndef bad = get #q;\nmain = bad;\n";
        let f = SourceFile::parse(src, ParseOptions::default()).unwrap();
        let err = f.check(SystemMode::Unstratified, true).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::UnboundRegion);
        assert_eq!(err.span.map(|s| s.line), Some(2));
        assert_eq!(f.threads[0], Term::get(Term::region("q")));
    }

    #[test]
    fn store_values_must_be_values() {
        let src = "region r : Unit;\nstore r <= {get #r};\nmain = unit;\n";
        assert!(matches!(SourceFile::parse(src, ParseOptions::default()), Err(SourceError::NotAValue { .. })));
    }
}

//! Type-directed generation of well-typed terms, programs, and types.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use stratal::frontend::parse::ParseOptions;
use stratal::frontend::source::SourceFile;
use stratal::syntax::{BinOp, Effect, Program, RegionName, Store, Term, Type};
use stratal::typing::RegionContext;

pub fn eff(rs: &[&str]) -> Effect {
    rs.iter().map(RegionName::new).collect()
}

/// A stratified context with base, integer, function, and region-valued
/// contents.
pub fn regions() -> RegionContext {
    RegionContext::new()
        .with("a", Type::Unit)
        .with("n", Type::Int)
        .with("f", Type::arrow(Type::Unit, eff(&["a"]), Type::Unit))
        .with("h", Type::arrow(Type::Int, eff(&["a", "f"]), Type::Unit))
        .with("q", Type::reg("a", Type::Unit))
}

pub struct Gen<'a, R: Rng> {
    pub rng: &'a mut R,
    pub regions: RegionContext,
    fresh: usize,
}

impl<'a, R: Rng> Gen<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Gen { rng, regions: regions(), fresh: 0 }
    }

    fn name(&mut self) -> String {
        self.fresh += 1;
        let stems = ["x", "y", "z", "v"];
        // reuse names often, so that shadowing and capture are exercised
        format!("{}{}", stems[self.fresh % stems.len()], self.rng.gen_range(0..3))
    }

    /// Types that can be the argument of a generated application.
    pub fn small_type(&mut self) -> Type {
        let pool = [
            Type::Unit,
            Type::Int,
            Type::arrow(Type::Unit, Effect::empty(), Type::Unit),
            Type::arrow(Type::Unit, eff(&["a"]), Type::Unit),
            Type::reg("a", Type::Unit),
            Type::reg("f", Type::arrow(Type::Unit, eff(&["a"]), Type::Unit)),
        ];
        pool.choose(self.rng).expect("nonempty").clone()
    }

    pub fn subset(&mut self, e: &Effect) -> Effect {
        e.iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect()
    }

    /// A closed value of type `ty`.
    pub fn value(&mut self, ty: &Type) -> Term {
        let mut env = Vec::new();
        self.value_in(ty, &mut env, 2)
    }

    /// Abstraction bodies get at most `depth`, so generation always ends.
    fn value_in(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, depth: u32) -> Term {
        match ty {
            Type::Unit => Term::Unit,
            Type::Int => Term::Int(self.rng.gen_range(-3..6)),
            Type::Reg(r, _) => Term::Region(r.clone()),
            Type::Arrow(dom, e, cod) => {
                let x = self.name();
                env.push((x.clone(), (**dom).clone()));
                let depth = self.rng.gen_range(0..=depth);
                let body = self.term_in(cod, e, env, depth);
                env.pop();
                Term::lam(x, (**dom).clone(), body)
            }
            Type::Behaviour => unreachable!("no value has the behaviour type"),
        }
    }

    /// A term of type `ty` (or a subtype) whose effect is within `budget`.
    pub fn term(&mut self, ty: &Type, budget: &Effect, depth: u32) -> Term {
        let mut env = Vec::new();
        self.term_in(ty, budget, &mut env, depth)
    }

    pub fn term_in(&mut self, ty: &Type, budget: &Effect, env: &mut Vec<(String, Type)>, depth: u32) -> Term {
        // only the innermost binding of each name is visible
        let vars: Vec<String> = env
            .iter()
            .enumerate()
            .filter(|(i, (x, t))| t == ty && !env[i + 1..].iter().any(|(y, _)| y == x))
            .map(|(_, (x, _))| x.clone())
            .collect();
        if depth == 0 || self.rng.gen_bool(0.2) {
            if !vars.is_empty() && self.rng.gen_bool(0.5) {
                return Term::var(vars.choose(self.rng).expect("nonempty").clone());
            }
            return match ty {
                Type::Behaviour => Term::par(vec![Term::Unit, Term::Unit]),
                _ => self.value_in(ty, env, depth.saturating_sub(1)),
            };
        }
        let d = depth - 1;
        let readable: Vec<RegionName> = budget
            .iter()
            .filter(|r| self.regions.get(r).is_some_and(|c| c == ty))
            .cloned()
            .collect();
        let mut choices: Vec<u8> = vec![0, 1];
        if !readable.is_empty() {
            choices.push(2);
        }
        if *ty == Type::Unit && !budget.is_empty() {
            choices.push(3);
        }
        if matches!(ty, Type::Reg(r, _) if budget.contains(r)) {
            choices.push(4);
        }
        if !ty.is_behaviour() {
            choices.extend([5, 7]);
        }
        if *ty == Type::Int {
            choices.extend([6, 6]);
        }
        if ty.is_behaviour() {
            choices.extend([8, 8]);
        }
        match *choices.choose(self.rng).expect("nonempty") {
            // application of a fresh or generated function
            0 | 1 => {
                let arg_ty = self.small_type();
                let latent = self.subset(budget);
                let f = self.term_in(&Type::arrow(arg_ty.clone(), latent, ty.clone()), budget, env, d);
                let a = self.term_in(&arg_ty, budget, env, d);
                Term::app(f, a)
            }
            2 => {
                let r = readable.choose(self.rng).expect("nonempty").clone();
                let content = self.regions.get(&r).expect("declared").clone();
                Term::get(self.term_in(&Type::Reg(r, Box::new(content)), budget, env, d))
            }
            3 => {
                let r = budget.iter().collect::<Vec<_>>().choose(self.rng).map(|r| (*r).clone()).expect("nonempty");
                let content = self.regions.get(&r).expect("declared").clone();
                let target = self.term_in(&Type::Reg(r, Box::new(content.clone())), budget, env, d);
                Term::set(target, self.term_in(&content, budget, env, d))
            }
            4 => {
                let Type::Reg(r, content) = ty else { unreachable!() };
                let x = self.name();
                let v = self.term_in(content, budget, env, d);
                Term::app(Term::lam(x, Type::Unit, Term::Region(r.clone())), Term::set(Term::Region(r.clone()), v))
            }
            5 => {
                let now = self.term_in(ty, budget, env, d);
                let all = self.regions.domain_effect();
                let later = self.term_in(ty, &all, env, d);
                Term::else_next(now, later)
            }
            6 => {
                let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul].choose(self.rng).expect("nonempty");
                if self.rng.gen_bool(0.2) {
                    Term::is_zero(self.term_in(&Type::Int, budget, env, d))
                } else {
                    Term::binop(op, self.term_in(&Type::Int, budget, env, d), self.term_in(&Type::Int, budget, env, d))
                }
            }
            7 => {
                let c = self.term_in(&Type::Int, budget, env, d);
                Term::if_zero(c, self.term_in(ty, budget, env, d), self.term_in(ty, budget, env, d))
            }
            _ => {
                let n = self.rng.gen_range(2..4);
                let threads = (0..n)
                    .map(|_| {
                        let t = if self.rng.gen_bool(0.7) { Type::Unit } else { Type::Behaviour };
                        self.term_in(&t, budget, env, d)
                    })
                    .collect();
                Term::par(threads)
            }
        }
    }

    /// A closed program: threads within `budget` plus a well-typed store.
    pub fn program(&mut self, depth: u32) -> Program {
        let budget = self.regions.domain_effect();
        let n = self.rng.gen_range(1..4);
        let threads = (0..n)
            .map(|_| {
                let ty = [Type::Unit, Type::Int, Type::Behaviour].choose(self.rng).expect("nonempty").clone();
                self.term(&ty, &budget, depth)
            })
            .collect();
        let mut store = Store::new();
        let entries = self.regions.entries().to_vec();
        for (r, content) in entries {
            for _ in 0..self.rng.gen_range(0..2) {
                let v = self.value(&content);
                store.insert(r.clone(), v);
            }
        }
        Program::new(threads, store)
    }

    /// A well-formed type of depth at most `depth`.
    pub fn ty(&mut self, depth: u32) -> Type {
        let all: Vec<RegionName> = self.regions.domain().into_iter().collect();
        match self.rng.gen_range(0..if depth == 0 { 3 } else { 6 }) {
            0 => Type::Unit,
            1 => Type::Int,
            2 => {
                let r = all.choose(self.rng).expect("nonempty").clone();
                let c = self.regions.get(&r).expect("declared").clone();
                Type::Reg(r, Box::new(c))
            }
            _ => {
                let e = self.subset(&self.regions.domain_effect());
                let dom = self.ty(depth - 1);
                let cod = if self.rng.gen_bool(0.1) { Type::Behaviour } else { self.ty(depth - 1) };
                Type::arrow(dom, e, cod)
            }
        }
    }

    /// A random subtype of `ty` (shrinks covariant effects, grows contravariant ones).
    pub fn below(&mut self, ty: &Type) -> Type {
        match ty {
            Type::Arrow(d, e, c) => {
                let e = self.subset(e);
                let d = self.above(d);
                Type::arrow(d, e, self.below(c))
            }
            _ => ty.clone(),
        }
    }

    pub fn above(&mut self, ty: &Type) -> Type {
        match ty {
            Type::Arrow(d, e, c) => {
                let extra = self.subset(&self.regions.domain_effect());
                let d = self.below(d);
                Type::arrow(d, e.union(&extra), self.above(c))
            }
            _ => ty.clone(),
        }
    }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every corpus file, parsed.
pub fn corpus() -> Vec<(String, SourceFile)> {
    stratal::frontend::corpus::corpus_files(&corpus_dir())
        .expect("corpus directory")
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).expect("readable");
            let name = p.file_name().expect("file").to_string_lossy().into_owned();
            let file = SourceFile::parse(&src, ParseOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, file)
        })
        .collect()
}

//! Bidirectional checking of terms, stores, and programs.
//!
//! Synthesis returns the least type-and-effect derivable for a term without
//! a trailing subsumption. Subsumption is applied only where a term meets an
//! expected type: application arguments, `set` payloads, the two branches of
//! `elsenext`/`ifz` (typed at their join), stored values, and top-level
//! expected pairs.

use super::env::{RegionContext, SystemMode, TypeEffect, TypingContext};
use super::error::{TypeError, TypeErrorKind};
use super::subtype::{join, subtype, subtype_type};
use super::wf::{wf_region_context, wf_type_effect, wf_type_in, wf_typing_context};
use crate::syntax::{Effect, Program, RegionName, Store, Term, Type};

/// A checker bound to a validated region context.
#[derive(Clone, Debug)]
pub struct Checker<'r> {
    regions: &'r RegionContext,
    mode: SystemMode,
    subsumption: bool,
}

impl<'r> Checker<'r> {
    /// Validate `regions` under `mode` and build a checker for it.
    pub fn new(regions: &'r RegionContext, mode: SystemMode) -> Result<Self, TypeError> {
        wf_region_context(regions, mode)?;
        Ok(Checker { regions, mode, subsumption: true })
    }

    /// Replace every subsumption position by exact type equality.
    pub fn without_subsumption(mut self) -> Self {
        self.subsumption = false;
        self
    }

    pub fn mode(&self) -> SystemMode {
        self.mode
    }

    pub fn regions(&self) -> &RegionContext {
        self.regions
    }

    fn effect_free(&self) -> bool {
        self.mode == SystemMode::EffectFree
    }

    fn coerces(&self, actual: &Type, expected: &Type) -> bool {
        if self.effect_free() {
            actual.erase() == expected.erase()
        } else if self.subsumption {
            subtype_type(actual, expected)
        } else {
            actual == expected
        }
    }

    fn join_branches(&self, a: &Type, b: &Type) -> Option<Type> {
        if self.effect_free() {
            (a.erase() == b.erase()).then(|| a.erase())
        } else if self.subsumption {
            join(a, b)
        } else {
            (a == b).then(|| a.clone())
        }
    }

    fn touch(&self, effect: Effect, r: &RegionName) -> Effect {
        if self.effect_free() {
            effect
        } else {
            effect.with(r.clone())
        }
    }

    fn annotation(&self, ty: &Type) -> Result<Type, TypeError> {
        wf_type_in(self.regions, ty, self.mode, false)?;
        Ok(if self.effect_free() { ty.erase() } else { ty.clone() })
    }

    /// Synthesize the minimal `(α, e)` of `t` under `gamma`.
    pub fn synth(&self, gamma: &TypingContext, t: &Term) -> Result<TypeEffect, TypeError> {
        wf_typing_context(self.regions, gamma, self.mode)?;
        let mut gamma = gamma.clone();
        self.infer(&mut gamma, t)
    }

    /// Synthesize, then require the result to be `≤ expected`.
    pub fn check(&self, gamma: &TypingContext, t: &Term, expected: &TypeEffect) -> Result<TypeEffect, TypeError> {
        wf_type_effect(self.regions, expected, self.mode)?;
        let actual = self.synth(gamma, t)?;
        let ok = if self.effect_free() {
            actual.ty.erase() == expected.ty.erase()
        } else {
            self.coerces(&actual.ty, &expected.ty) && actual.effect.is_subset(&expected.effect)
        };
        if ok {
            Ok(actual)
        } else {
            Err(TypeError::new(
                TypeErrorKind::ExpectedMismatch,
                "sub",
                format!("term {t} does not have the expected type and effect"),
            )
            .expected_actual(pair(expected), pair(&actual)))
        }
    }

    fn infer(&self, gamma: &mut TypingContext, t: &Term) -> Result<TypeEffect, TypeError> {
        match t {
            Term::Var(x) => match gamma.get(x) {
                Some(ty) => Ok(TypeEffect::pure(ty.clone())),
                None => Err(TypeError::new(TypeErrorKind::UnboundVariable, "var", format!("variable {x} is not bound"))),
            },
            Term::Region(r) => match self.regions.get(r) {
                Some(content) => Ok(TypeEffect::pure(Type::reg(r.clone(), self.annotation(content)?))),
                None => Err(TypeError::new(
                    TypeErrorKind::UnboundRegion,
                    "region",
                    format!("region {r} is not in dom(R)"),
                )),
            },
            Term::Unit => Ok(TypeEffect::pure(Type::Unit)),
            Term::Int(_) => Ok(TypeEffect::pure(Type::Int)),
            Term::Lam(x, ann, body) => {
                let ann = self.annotation(ann).map_err(|mut e| {
                    e.rule = "abs";
                    e.detail = format!("in the annotation of {x}: {}", e.detail);
                    e
                })?;
                gamma.push(x.clone(), ann.clone());
                let body = self.infer(gamma, body);
                gamma.pop();
                let body = body?;
                Ok(TypeEffect::pure(Type::arrow(ann, body.effect, body.ty)))
            }
            Term::App(fun, arg) => {
                let f = self.infer(gamma, fun)?;
                let Type::Arrow(dom, latent, cod) = &f.ty else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAFunction,
                        "app",
                        format!("{fun} is applied but has type {}", f.ty),
                    ));
                };
                let a = self.infer(gamma, arg)?;
                if !self.coerces(&a.ty, dom) {
                    return Err(TypeError::new(
                        TypeErrorKind::DomainMismatch,
                        "app",
                        format!("argument {arg} does not fit the domain of {fun}"),
                    )
                    .expected_actual(dom, &a.ty));
                }
                Ok(TypeEffect::new((**cod).clone(), f.effect.union(latent).union(&a.effect)))
            }
            Term::Get(target) => {
                let g = self.infer(gamma, target)?;
                let Type::Reg(r, content) = &g.ty else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotARegion,
                        "get",
                        format!("get reads from {target}, which has type {}", g.ty),
                    ));
                };
                Ok(TypeEffect::new((**content).clone(), self.touch(g.effect.clone(), r)))
            }
            Term::Set(target, value) => {
                let g = self.infer(gamma, target)?;
                let Type::Reg(r, content) = &g.ty else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotARegion,
                        "set",
                        format!("set writes to {target}, which has type {}", g.ty),
                    ));
                };
                let v = self.infer(gamma, value)?;
                if !self.coerces(&v.ty, content) {
                    return Err(TypeError::new(
                        TypeErrorKind::PayloadMismatch,
                        "set",
                        format!("value {value} cannot be stored in region {r}"),
                    )
                    .expected_actual(content, &v.ty));
                }
                Ok(TypeEffect::new(Type::Unit, self.touch(g.effect.union(&v.effect), r)))
            }
            Term::ElseNext(now, later) => {
                let n = self.infer(gamma, now)?;
                if n.ty.is_behaviour() {
                    return Err(TypeError::new(
                        TypeErrorKind::BehaviourInDomain,
                        "else-next",
                        format!("{now} has behaviour type; elsenext branches must have an ordinary type"),
                    ));
                }
                let l = self.infer(gamma, later)?;
                let ty = self.join_branches(&n.ty, &l.ty).ok_or_else(|| {
                    TypeError::new(
                        TypeErrorKind::BranchMismatch,
                        "else-next",
                        format!("branches of elsenext have incompatible types"),
                    )
                    .expected_actual(&n.ty, &l.ty)
                })?;
                // only the first instant's effect is recorded
                Ok(TypeEffect::new(ty, n.effect))
            }
            Term::Par(threads) => {
                let mut effect = Effect::empty();
                for th in threads {
                    effect = effect.union(&self.infer(gamma, th)?.effect);
                }
                Ok(TypeEffect::new(Type::Behaviour, effect))
            }
            Term::BinOp(op, a, b) => {
                let x = self.int_operand(gamma, a, op.symbol())?;
                let y = self.int_operand(gamma, b, op.symbol())?;
                Ok(TypeEffect::new(Type::Int, x.union(&y)))
            }
            Term::IsZero(a) => Ok(TypeEffect::new(Type::Int, self.int_operand(gamma, a, "iszero")?)),
            Term::IfZero(c, then, els) => {
                let ec = self.int_operand(gamma, c, "ifz")?;
                let a = self.infer(gamma, then)?;
                let b = self.infer(gamma, els)?;
                let ty = self.join_branches(&a.ty, &b.ty).ok_or_else(|| {
                    TypeError::new(TypeErrorKind::BranchMismatch, "ifz", "branches of ifz have incompatible types")
                        .expected_actual(&a.ty, &b.ty)
                })?;
                Ok(TypeEffect::new(ty, ec.union(&a.effect).union(&b.effect)))
            }
        }
    }

    fn int_operand(&self, gamma: &mut TypingContext, t: &Term, rule: &'static str) -> Result<Effect, TypeError> {
        let te = self.infer(gamma, t)?;
        if te.ty == Type::Int {
            Ok(te.effect)
        } else {
            Err(TypeError::new(TypeErrorKind::NotAnInteger, "prim", format!("operand {t} of {rule} is not an integer"))
                .expected_actual(Type::Int, &te.ty))
        }
    }

    /// `R;Γ ⊢ S : (B, ∅)`: every value stored in `r` has type `≤ R(r)` and
    /// effect `∅`.
    pub fn check_store(&self, gamma: &TypingContext, store: &Store) -> Result<(), TypeError> {
        wf_typing_context(self.regions, gamma, self.mode)?;
        for (r, v) in store.iter() {
            let Some(content) = self.regions.get(r) else {
                return Err(TypeError::new(
                    TypeErrorKind::UnboundRegion,
                    "store",
                    format!("store binds region {r}, which is not in dom(R)"),
                ));
            };
            let mut g = gamma.clone();
            let ill_typed = |detail: String| TypeError::new(TypeErrorKind::StoreValueIllTyped, "store", detail);
            let te = self.infer(&mut g, v).map_err(|e| ill_typed(format!("value {v} in region {r}: {e}")))?;
            if !self.coerces(&te.ty, content) || !te.effect.is_empty() {
                return Err(ill_typed(format!("value {v} cannot be stored in region {r}")).expected_actual(content, &te.ty));
            }
        }
        Ok(())
    }

    /// `R;Γ ⊢ M1,…,Mn,S : (B, e1∪…∪en)`
    pub fn check_program(&self, gamma: &TypingContext, program: &Program) -> Result<TypeEffect, TypeError> {
        self.check_store(gamma, &program.store)?;
        let mut effect = Effect::empty();
        for t in program.terms() {
            effect = effect.union(&self.synth(gamma, t)?.effect);
        }
        Ok(TypeEffect::new(Type::Behaviour, effect))
    }

    /// Check a program against `(B, expected)`.
    pub fn check_program_against(
        &self,
        gamma: &TypingContext,
        program: &Program,
        expected: &Effect,
    ) -> Result<TypeEffect, TypeError> {
        let te = self.check_program(gamma, program)?;
        let target = TypeEffect::new(Type::Behaviour, expected.clone());
        if self.effect_free() || subtype(self.regions, &te, &target) {
            Ok(te)
        } else {
            Err(TypeError::new(TypeErrorKind::ExpectedMismatch, "program", "program effect exceeds the expected effect")
                .expected_actual(pair(&target), pair(&te)))
        }
    }
}

fn pair(te: &TypeEffect) -> String {
    te.to_string()
}

/// One-shot `R;Γ ⊢ t : (α, e)`; with `expected`, also checks `≤ expected`.
pub fn check_term(
    regions: &RegionContext,
    gamma: &TypingContext,
    t: &Term,
    expected: Option<&TypeEffect>,
    mode: SystemMode,
) -> Result<TypeEffect, TypeError> {
    let checker = Checker::new(regions, mode)?;
    match expected {
        Some(expected) => checker.check(gamma, t, expected),
        None => checker.synth(gamma, t),
    }
}

pub fn check_store(regions: &RegionContext, gamma: &TypingContext, store: &Store, mode: SystemMode) -> Result<(), TypeError> {
    Checker::new(regions, mode)?.check_store(gamma, store)
}

pub fn check_program(
    regions: &RegionContext,
    gamma: &TypingContext,
    program: &Program,
    mode: SystemMode,
) -> Result<TypeEffect, TypeError> {
    Checker::new(regions, mode)?.check_program(gamma, program)
}

/// `R;Γ ⊢ef t : A`, returning the erased type.
pub fn erase_effects(regions: &RegionContext, gamma: &TypingContext, t: &Term) -> Result<Type, TypeError> {
    Ok(check_term(regions, gamma, t, None, SystemMode::EffectFree)?.ty)
}

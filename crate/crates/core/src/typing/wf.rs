//! Well-formedness of region contexts and types.
//!
//! Unstratified: every entry of `R` must be compatible with `R` itself, so
//! regions may refer to each other circularly. Stratified: entry `i` may
//! only mention entries `0..i`.

use std::collections::BTreeSet;

use super::env::{RegionContext, SystemMode, TypeEffect, TypingContext};
use super::error::{TypeError, TypeErrorKind};
use crate::syntax::{Effect, RegionName, Type};

/// The regions a type may mention, and the context used to resolve them.
struct Scope<'a> {
    visible: &'a [(RegionName, Type)],
    full: &'a RegionContext,
    mode: SystemMode,
    /// Region being declared, for stratification diagnostics.
    declaring: Option<&'a RegionName>,
}

impl Scope<'_> {
    fn lookup(&self, r: &RegionName) -> Option<&Type> {
        self.visible.iter().find(|(name, _)| name == r).map(|(_, ty)| ty)
    }

    fn missing(&self, r: &RegionName, rule: &'static str) -> TypeError {
        if self.full.contains(r) {
            let detail = match self.declaring {
                Some(d) if d == r => format!("type of region {r} mentions {r} itself"),
                Some(d) => format!("type of region {d} mentions region {r}, which is not declared before it"),
                None => format!("region {r} is not in scope"),
            };
            TypeError::new(TypeErrorKind::StratificationViolation, rule, detail)
        } else {
            TypeError::new(TypeErrorKind::UnboundRegion, rule, format!("region {r} is not declared"))
        }
    }

    fn effect(&self, e: &Effect) -> Result<(), TypeError> {
        if self.mode == SystemMode::EffectFree {
            return Ok(());
        }
        match e.iter().find(|r| self.lookup(r).is_none()) {
            None => Ok(()),
            Some(r) if self.full.contains(r) => Err(self.missing(r, "wf-arrow")),
            Some(r) => Err(TypeError::new(
                TypeErrorKind::EffectNotInScope,
                "wf-arrow",
                format!("effect {e} mentions region {r}, which is not in dom(R)"),
            )),
        }
    }

    /// `R ⊢ α`; `behaviour_ok` is true in codomain positions.
    fn ty(&self, ty: &Type, behaviour_ok: bool) -> Result<(), TypeError> {
        match ty {
            Type::Unit | Type::Int => Ok(()),
            Type::Behaviour if behaviour_ok => Ok(()),
            Type::Behaviour => Err(TypeError::new(
                TypeErrorKind::BehaviourInDomain,
                "wf-type",
                "the behaviour type may only appear as a codomain",
            )),
            Type::Reg(r, content) => {
                let declared = self.lookup(r).ok_or_else(|| self.missing(r, "wf-reg"))?;
                let matches = match self.mode {
                    SystemMode::EffectFree => declared.erase() == content.erase(),
                    _ => declared == content.as_ref(),
                };
                if matches {
                    Ok(())
                } else {
                    Err(TypeError::new(
                        TypeErrorKind::RegionContentMismatch,
                        "wf-reg",
                        format!("Reg[{r}] carries content {content}, but R({r}) = {declared}"),
                    )
                    .expected_actual(declared, content))
                }
            }
            Type::Arrow(dom, eff, cod) => {
                self.ty(dom, false)?;
                self.ty(cod, true)?;
                self.effect(eff)
            }
        }
    }
}

/// `R ⊢` under `mode`.
pub fn wf_region_context(regions: &RegionContext, mode: SystemMode) -> Result<(), TypeError> {
    let entries = regions.entries();
    let mut seen = BTreeSet::new();
    for (r, _) in entries {
        if !seen.insert(r) {
            return Err(TypeError::new(
                TypeErrorKind::DuplicateRegion,
                "wf-context",
                format!("region {r} is declared twice"),
            )
            .in_region(r));
        }
    }
    for (i, (r, ty)) in entries.iter().enumerate() {
        let visible = match mode {
            SystemMode::Stratified => &entries[..i],
            SystemMode::Unstratified | SystemMode::EffectFree => entries,
        };
        let scope = Scope { visible, full: regions, mode, declaring: Some(r) };
        scope.ty(ty, false).map_err(|mut e| {
            if e.rule != "wf-context" {
                e.detail = format!("in the declaration of region {r}: {}", e.detail);
            }
            e.in_region(r)
        })?;
    }
    Ok(())
}

fn full_scope(regions: &RegionContext, mode: SystemMode) -> Scope<'_> {
    Scope { visible: regions.entries(), full: regions, mode, declaring: None }
}

/// `R ⊢ α`
pub fn wf_type(regions: &RegionContext, ty: &Type, mode: SystemMode) -> Result<(), TypeError> {
    wf_region_context(regions, mode)?;
    full_scope(regions, mode).ty(ty, true)
}

/// `R ⊢ (α, e)`
pub fn wf_type_effect(regions: &RegionContext, te: &TypeEffect, mode: SystemMode) -> Result<(), TypeError> {
    wf_type(regions, &te.ty, mode)?;
    if mode == SystemMode::EffectFree {
        return Ok(());
    }
    match te.effect.iter().find(|r| !regions.contains(r)) {
        None => Ok(()),
        Some(r) => Err(TypeError::new(
            TypeErrorKind::EffectNotInScope,
            "wf-pair",
            format!("effect {} mentions region {r}, which is not in dom(R)", te.effect),
        )),
    }
}

/// Check a type under an already validated region context.
pub(crate) fn wf_type_in(regions: &RegionContext, ty: &Type, mode: SystemMode, behaviour_ok: bool) -> Result<(), TypeError> {
    full_scope(regions, mode).ty(ty, behaviour_ok)
}

/// `R ⊢ Γ`
pub fn wf_typing_context(regions: &RegionContext, gamma: &TypingContext, mode: SystemMode) -> Result<(), TypeError> {
    wf_region_context(regions, mode)?;
    for (x, ty) in gamma.entries() {
        wf_type_in(regions, ty, mode, false).map_err(|mut e| {
            e.detail = format!("in the type of variable {x}: {}", e.detail);
            e
        })?;
    }
    Ok(())
}

//! Subtyping induced by effect inclusion, plus the joins and meets the
//! checker uses to type branching constructs minimally.

use super::env::{RegionContext, TypeEffect};
use crate::syntax::Type;

/// `A ≤ A'` on types: reflexive on base and region types, contravariant in
/// arrow domains, covariant in codomains, and `e ⊆ e'` on latent effects.
pub fn subtype_type(left: &Type, right: &Type) -> bool {
    match (left, right) {
        (Type::Unit, Type::Unit) | (Type::Int, Type::Int) | (Type::Behaviour, Type::Behaviour) => true,
        // R(r) fixes the content, so region types only relate to themselves.
        (Type::Reg(r, a), Type::Reg(s, b)) => r == s && a == b,
        (Type::Arrow(d1, e1, c1), Type::Arrow(d2, e2, c2)) => {
            e1.is_subset(e2) && subtype_type(d2, d1) && subtype_type(c1, c2)
        }
        _ => false,
    }
}

/// `R ⊢ (α, e) ≤ (α', e')`: requires `e ⊆ e' ⊆ dom(R)`, and every region
/// named by either type to be in `dom(R)`.
pub fn subtype(regions: &RegionContext, left: &TypeEffect, right: &TypeEffect) -> bool {
    let dom = regions.domain();
    let in_scope = |ty: &Type| ty.regions().is_subset(&dom);
    left.effect.is_subset(&right.effect)
        && right.effect.iter().all(|r| dom.contains(r))
        && in_scope(&left.ty)
        && in_scope(&right.ty)
        && subtype_type(&left.ty, &right.ty)
}

/// Least upper bound, when one exists.
pub fn join(a: &Type, b: &Type) -> Option<Type> {
    match (a, b) {
        (Type::Arrow(d1, e1, c1), Type::Arrow(d2, e2, c2)) => {
            Some(Type::arrow(meet(d1, d2)?, e1.union(e2), join(c1, c2)?))
        }
        _ if a == b => Some(a.clone()),
        _ => None,
    }
}

/// Greatest lower bound, when one exists.
pub fn meet(a: &Type, b: &Type) -> Option<Type> {
    match (a, b) {
        (Type::Arrow(d1, e1, c1), Type::Arrow(d2, e2, c2)) => {
            Some(Type::arrow(join(d1, d2)?, e1.intersection(e2), meet(c1, c2)?))
        }
        _ if a == b => Some(a.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Effect, RegionName};

    fn eff(rs: &[&str]) -> Effect {
        rs.iter().map(|r| RegionName::new(r)).collect()
    }

    fn fun(e: &[&str]) -> Type {
        Type::arrow(Type::Unit, eff(e), Type::Unit)
    }

    #[test]
    fn latent_effect_widening() {
        let r = RegionContext::new().with("r", Type::Unit);
        let pure = TypeEffect::pure(fun(&[]));
        let eff_r = TypeEffect::pure(fun(&["r"]));
        assert!(subtype(&r, &pure, &eff_r));
        assert!(!subtype(&r, &eff_r, &pure));
        assert!(subtype(&r, &pure, &pure));
        // e' must stay inside dom(R)
        assert!(!subtype(&RegionContext::new(), &pure, &eff_r));
    }

    #[test]
    fn domain_is_contravariant() {
        let narrow = Type::arrow(fun(&["r"]), Effect::empty(), Type::Unit);
        let wide = Type::arrow(fun(&[]), Effect::empty(), Type::Unit);
        assert!(subtype_type(&narrow, &wide));
        assert!(!subtype_type(&wide, &narrow));
    }

    #[test]
    fn pair_effects() {
        let r = RegionContext::new().with("r", Type::Unit).with("s", Type::Unit);
        assert!(subtype(&r, &TypeEffect::new(Type::Unit, eff(&["r"])), &TypeEffect::new(Type::Unit, eff(&["r", "s"]))));
        assert!(!subtype(&r, &TypeEffect::new(Type::Unit, eff(&["r", "s"])), &TypeEffect::new(Type::Unit, eff(&["r"]))));
    }

    #[test]
    fn joins_and_meets() {
        assert_eq!(join(&fun(&["r"]), &fun(&["s"])), Some(fun(&["r", "s"])));
        assert_eq!(meet(&fun(&["r"]), &fun(&["s"])), Some(fun(&[])));
        assert_eq!(join(&Type::Unit, &Type::Int), None);
        let hi = Type::arrow(fun(&["r"]), Effect::empty(), Type::Unit);
        let lo = Type::arrow(fun(&[]), Effect::empty(), Type::Unit);
        assert_eq!(join(&hi, &lo), Some(lo.clone()));
    }
}

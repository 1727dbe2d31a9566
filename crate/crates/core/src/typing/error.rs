use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{RegionName, Span};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TypeErrorKind {
    UnboundVariable,
    UnboundRegion,
    DuplicateRegion,
    /// A `Reg_r(A)` whose content differs from `R(r)`.
    RegionContentMismatch,
    StratificationViolation,
    EffectNotInScope,
    /// The behaviour type outside a codomain position.
    BehaviourInDomain,
    NotAFunction,
    NotARegion,
    NotAnInteger,
    DomainMismatch,
    PayloadMismatch,
    BranchMismatch,
    ExpectedMismatch,
    StoreValueIllTyped,
}

impl TypeErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable => "UnboundVariable",
            TypeErrorKind::UnboundRegion => "UnboundRegion",
            TypeErrorKind::DuplicateRegion => "DuplicateRegion",
            TypeErrorKind::RegionContentMismatch => "RegionContentMismatch",
            TypeErrorKind::StratificationViolation => "StratificationViolation",
            TypeErrorKind::EffectNotInScope => "EffectNotInScope",
            TypeErrorKind::BehaviourInDomain => "BehaviourInDomain",
            TypeErrorKind::NotAFunction => "NotAFunction",
            TypeErrorKind::NotARegion => "NotARegion",
            TypeErrorKind::NotAnInteger => "NotAnInteger",
            TypeErrorKind::DomainMismatch => "DomainMismatch",
            TypeErrorKind::PayloadMismatch => "PayloadMismatch",
            TypeErrorKind::BranchMismatch => "BranchMismatch",
            TypeErrorKind::ExpectedMismatch => "ExpectedMismatch",
            TypeErrorKind::StoreValueIllTyped => "StoreValueIllTyped",
        }
    }

    /// Whether the failure is in a region context or type rather than a term.
    pub fn is_well_formedness(self) -> bool {
        matches!(
            self,
            TypeErrorKind::UnboundRegion
                | TypeErrorKind::DuplicateRegion
                | TypeErrorKind::RegionContentMismatch
                | TypeErrorKind::StratificationViolation
                | TypeErrorKind::EffectNotInScope
                | TypeErrorKind::BehaviourInDomain
        )
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed judgement. `rule` names the typing rule that failed.
#[derive(Clone, PartialEq, Eq, Debug, Error, Serialize)]
#[error("{kind} (rule {rule}): {detail}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub rule: &'static str,
    pub detail: String,
    pub span: Option<Span>,
    pub expected: Option<String>,
    pub actual: Option<String>,
    /// The region whose declaration is ill formed, for context errors.
    pub region: Option<RegionName>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, rule: &'static str, detail: impl Into<String>) -> Self {
        TypeError { kind, rule, detail: detail.into(), span: None, expected: None, actual: None, region: None }
    }

    pub fn expected_actual(mut self, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        self.expected = Some(expected.to_string());
        self.actual = Some(actual.to_string());
        self
    }

    pub fn in_region(mut self, r: &RegionName) -> Self {
        self.region.get_or_insert_with(|| r.clone());
        self
    }

    pub fn at(mut self, span: Span) -> Self {
        if self.span.is_none() {
            self.span = Some(span);
        }
        self
    }

    /// Human-readable rendering: location, kind, rule, and detail.
    pub fn render(&self, file: Option<&str>) -> String {
        let mut out = String::new();
        match (file, self.span) {
            (Some(file), Some(span)) => out.push_str(&format!("{file}:{span}: ")),
            (None, Some(span)) => out.push_str(&format!("{span}: ")),
            (Some(file), None) => out.push_str(&format!("{file}: ")),
            (None, None) => {}
        }
        out.push_str(&format!("error[{}] in rule `{}`: {}", self.kind, self.rule, self.detail));
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            out.push_str(&format!("\n  expected: {e}\n  actual:   {a}"));
        }
        out
    }
}

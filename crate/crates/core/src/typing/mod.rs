//! Well-formedness, subtyping, and the type-and-effect rules for terms,
//! stores, and programs, in the unstratified, stratified, and effect-free
//! systems.

mod check;
mod env;
mod error;
mod subtype;
mod wf;

pub use check::{check_program, check_store, check_term, erase_effects, Checker};
pub use env::{RegionContext, SystemMode, TypeEffect, TypingContext};
pub use error::{TypeError, TypeErrorKind};
pub use subtype::{join, meet, subtype, subtype_type};
pub use wf::{wf_region_context, wf_type, wf_type_effect, wf_typing_context};

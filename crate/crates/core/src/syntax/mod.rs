//! Abstract syntax: regions, effects, types, terms, evaluation contexts,
//! stores, and programs.

mod context;
mod span;
mod store;
mod term;
mod types;

pub use context::{EvalContext, Frame};
pub use span::Span;
pub use store::{Program, StateKey, Store, Thread, ThreadId};
pub use term::{fresh_name, BinOp, Term};
pub use types::{Effect, RegionName, Type};

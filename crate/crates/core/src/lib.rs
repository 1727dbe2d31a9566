//! A λ-calculus with regions.
//!
//! Regions abstract the run-time locations (references, channels, signals)
//! created at one program point. The crate provides:
//!
//! - [`syntax`]: terms, types, evaluation contexts, stores, programs;
//! - [`typing`]: unstratified, stratified, and effect-free type-and-effect
//!   checking with subtyping;
//! - [`eval`]: decomposition, small-step reduction within an instant, the
//!   end-of-instant tick, and seeded or exhaustive runs;
//! - [`transform`]: the `ref`/`fix` macros and else-next elimination;
//! - [`surface`]: reference, channel, and signal store disciplines and a
//!   checker that regions simulate each of them;
//! - [`frontend`]: parser, printer, traces, corpus runner, and CLI.

pub mod eval;
pub mod frontend;
pub mod surface;
pub mod syntax;
pub mod transform;
pub mod typing;

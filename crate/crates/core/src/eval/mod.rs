//! Decomposition, reduction within an instant, the tick, and runs.

mod decompose;
mod run;
mod step;
mod tick;

pub use decompose::{decompose, Decomposition, DecompositionFailure, Delta, PrimRedex, Redex};
pub use run::{
    explore, run, ConfigError, Edge, Outcome, RunConfig, RunReport, SchedulerConfig, StateNode, StateSpace, Trace,
    TraceEntry, TraceKind,
};
pub use step::{step_program, step_thread, successors, waits_for_tick, Scheduler, StepEvent, StepResult, StepRule};
pub use tick::{tick, tick_thread, TickError};

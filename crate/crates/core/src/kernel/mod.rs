//! A minimal finite-domain kernel: integer variables with hole-aware bound
//! domains, a deduplicating propagation queue, and trailed backtracking.
//!
//! The kernel owns no constraint semantics. Propagators register *methods*
//! (slot + integer key) and watch variable events; every domain mutation
//! schedules the watching methods, and [`Solver::fixpoint`] runs the queue
//! until it is empty or some domain would wipe out. Methods are expected to
//! be idempotent: the queue deduplicates pending calls, and the execution
//! order (last-in-first-out by default, seeded-random for confluence tests)
//! must not change the fixpoint.

mod domain;
mod queue;
mod solver;
mod trail;

pub use queue::QueueOrder;
pub use solver::{EventKind, LoggedEvent, PropId, Propagate, RevInt, Slot, Solver, VarId};

/// Signal that a domain became (or would become) empty. Aborts the running
/// fixpoint; pending calls are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("domain wipeout")]
pub struct Failure;

pub type PropResult = Result<(), Failure>;

//! Centralized monitoring: Boolean satisfaction signals of local and
//! system-level formulas over a complete run.

mod central;
pub(crate) mod kernel;
mod logic;
mod oracle;
mod signal;

pub use central::{
    monitor_global, monitor_global_with, monitor_local, monitor_local_with, GlobalMonitor, LocalMonitor,
    MonitorOptions, SignalTable,
};
pub use logic::{count_verdict, graph_verdict, Logic};
pub use oracle::{oracle_eval, oracle_eval_global};
pub use signal::{BoolSignal, Signal, TernarySignal, Verdict};

pub(crate) use central::span_for;

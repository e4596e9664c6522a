//! Spatio-temporal logic over multi-agent systems with time-varying
//! multigraphs: formula syntax, parsing, centralized and distributed
//! monitoring, and translators from related logics.

pub mod casestudy;
pub mod distributed;
pub mod error;
pub mod formula;
pub mod model;
pub mod monitor;
pub mod parser;
pub mod random;
pub mod scenario;
pub mod translate;

pub use distributed::{is_determinable, monitor_dist, KnowledgeMask};
pub use error::{Error, Result};
pub use formula::{
    Bound, CountSet, Direction, Expr, GlobalExpr, GlobalFormula, GraphOp, LocalExpr, LocalFormula, Quantifier,
    TimeInterval, WeightInterval,
};
pub use model::{Edge, EdgeTriple, GraphSeries, GraphTrajectory, MasRun, MasTrajectory, MultigraphSnapshot};
pub use monitor::{
    monitor_global, monitor_local, BoolSignal, GlobalMonitor, LocalMonitor, MonitorOptions, Signal, TernarySignal,
    Verdict,
};
pub use parser::{parse_global, parse_local, ParseError};

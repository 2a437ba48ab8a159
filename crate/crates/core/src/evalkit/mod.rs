//! Ranking metrics, solver matrices, schedules and portfolio construction.

mod cover;
mod matrix;
mod metrics;
mod run;
mod sim;

pub use cover::{greedy_cover, robust_portfolio, solved_count, solved_percent, Candidate, Cover, RobustOutcome, RobustParams};
pub use matrix::{split_slice_id, EvalMatrix, Schedule, ScheduleEntry};
pub use metrics::{auc, compute_metrics, ranking_metrics, Metrics, MetricsError, MetricsReport, RECALL_CAP};
pub use run::{run_schedule, ScheduleRun, SliceRunner};
pub use sim::{planted_trap_matrices, TrapSim, TrapSimParams};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation matrix is empty")]
    EmptyMatrix,
    #[error("slot of {slot_s} s does not divide the budget of {budget_s} s")]
    BadSlots { budget_s: f64, slot_s: f64 },
    #[error("need at least 4 development problems, got {0}")]
    TooFewProblems(usize),
    #[error("unknown slice `{0}`")]
    UnknownSlice(String),
    #[error("schedule exceeds its budget")]
    OverBudget,
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

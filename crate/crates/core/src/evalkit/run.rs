use std::collections::BTreeMap;

use super::matrix::{EvalMatrix, Schedule};
use super::EvalError;
use crate::par::{self, Exec};

/// Something that can attempt a problem with a named slice.
pub trait SliceRunner: Sync {
    fn has_slice(&self, slice: &str) -> bool;
    /// Solve time when solved within `seconds`.
    fn run(&self, slice: &str, problem: &str, seconds: f64) -> Option<f64>;
}

impl SliceRunner for EvalMatrix {
    fn has_slice(&self, slice: &str) -> bool {
        self.slice_index(slice).is_some()
    }

    fn run(&self, slice: &str, problem: &str, seconds: f64) -> Option<f64> {
        let (s, p) = (self.slice_index(slice)?, self.problem_index(problem)?);
        self.get(s, p).filter(|&t| t <= seconds)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScheduleRun {
    /// Problem to (solving slice, elapsed seconds including earlier slices).
    pub solved: BTreeMap<String, (String, f64)>,
    /// Slices attempted per problem.
    pub attempts: BTreeMap<String, usize>,
}

impl ScheduleRun {
    /// Matrix row of the schedule over `problems`.
    pub fn row(&self, problems: &[String]) -> Vec<Option<f64>> {
        problems.iter().map(|p| self.solved.get(p).map(|s| s.1)).collect()
    }
}

/// Runs the slices in order on every problem, stopping at the first success.
pub fn run_schedule(schedule: &Schedule, problems: &[String], runner: &dyn SliceRunner, exec: Exec) -> Result<ScheduleRun, EvalError> {
    if let Some(e) = schedule.entries.iter().find(|e| !runner.has_slice(&e.slice)) {
        return Err(EvalError::UnknownSlice(e.slice.clone()));
    }
    let outcomes = par::map(exec, problems, |p| {
        let mut elapsed = 0.0;
        for (k, e) in schedule.entries.iter().enumerate() {
            if let Some(t) = runner.run(&e.slice, p, e.seconds) {
                return (k + 1, Some((e.slice.clone(), elapsed + t)));
            }
            elapsed += e.seconds;
        }
        (schedule.entries.len(), None)
    });
    let mut run = ScheduleRun::default();
    for (p, (attempts, solved)) in problems.iter().zip(outcomes) {
        run.attempts.insert(p.clone(), attempts);
        if let Some(s) = solved {
            run.solved.insert(p.clone(), s);
        }
    }
    Ok(run)
}

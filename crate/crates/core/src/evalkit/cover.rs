//! Greedy cover schedules and the randomized-split portfolio search.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::{EvalMatrix, Schedule, ScheduleEntry};
use super::EvalError;
use crate::par::{self, Exec};

/// Greedy cover with the marginal gain of every pick.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub schedule: Schedule,
    pub gains: Vec<usize>,
}

fn check_slots(budget_s: f64, slot_s: f64) -> Result<usize, EvalError> {
    let slots = budget_s / slot_s;
    if !(slot_s > 0.0 && budget_s >= slot_s) || (slots - slots.round()).abs() > 1e-9 {
        return Err(EvalError::BadSlots { budget_s, slot_s });
    }
    Ok(slots.round() as usize)
}

/// Repeatedly takes the slice solving most still-unsolved problems within
/// `slot_s` until the budget is spent or nothing is gained; ties go to the
/// smaller slice id.
pub fn greedy_cover(m: &EvalMatrix, budget_s: f64, slot_s: f64) -> Result<Cover, EvalError> {
    if m.is_empty() {
        return Err(EvalError::EmptyMatrix);
    }
    let slots = check_slots(budget_s, slot_s)?;
    let cols: Vec<usize> = (0..m.problems.len()).collect();
    Ok(cover_on(m, &cols, slots, slot_s, budget_s))
}

fn cover_on(m: &EvalMatrix, cols: &[usize], slots: usize, slot_s: f64, budget_s: f64) -> Cover {
    let mut solved = vec![false; m.problems.len()];
    let mut entries = Vec::new();
    let mut gains = Vec::new();
    for _ in 0..slots {
        let mut best: Option<(usize, usize)> = None;
        for s in 0..m.slices.len() {
            let gain = cols.iter().filter(|&&p| !solved[p] && m.solves(s, p, slot_s)).count();
            let better = match best {
                None => gain > 0,
                Some((b, g)) => gain > g || (gain == g && m.slices[s] < m.slices[b]),
            };
            if better {
                best = Some((s, gain));
            }
        }
        let Some((s, gain)) = best else { break };
        for &p in cols {
            if m.solves(s, p, slot_s) {
                solved[p] = true;
            }
        }
        entries.push(ScheduleEntry { slice: m.slices[s].clone(), seconds: slot_s });
        gains.push(gain);
    }
    Cover { schedule: Schedule { entries, budget: budget_s }, gains }
}

/// Problems among `cols` solved by the schedule's slices, each run for its seconds.
pub fn solved_count(m: &EvalMatrix, schedule: &Schedule, cols: &[usize]) -> usize {
    let rows: Vec<(usize, f64)> = schedule.entries.iter().filter_map(|e| m.slice_index(&e.slice).map(|s| (s, e.seconds))).collect();
    cols.iter().filter(|&&p| rows.iter().any(|&(s, t)| m.solves(s, p, t))).count()
}

pub fn solved_percent(m: &EvalMatrix, schedule: &Schedule, cols: &[usize]) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    100.0 * solved_count(m, schedule, cols) as f64 / cols.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustParams {
    pub n_splits: usize,
    pub top_k: usize,
    pub extra_splits: usize,
    /// Percentage a half must reach to count as passed; defaults to the best
    /// whole-set score among the candidates minus one point.
    pub balance_threshold: Option<f64>,
    pub seed: u64,
}

impl Default for RobustParams {
    fn default() -> Self {
        RobustParams { n_splits: 1000, top_k: 20, extra_splits: 80, balance_threshold: None, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub schedule: Schedule,
    /// Scores on the training half, the other half and the whole set.
    pub d1: f64,
    pub d2: f64,
    pub d: f64,
    /// Halves (out of `2 * extra_splits`) reaching the threshold.
    pub passes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustOutcome {
    pub winner: Candidate,
    pub candidates: Vec<Candidate>,
    pub threshold: f64,
}

fn halves(n: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let second = idx.split_off(n / 2);
    (idx, second)
}

/// Independent generator per (purpose, index) pair.
fn split_rng(seed: u64, purpose: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((purpose << 40) | i as u64);
    r
}

/// Builds greedy covers on random halves, keeps the `top_k` that do best on
/// the unseen half with a small train/test gap, re-tests them on fresh halves
/// and returns the one passing the threshold most often.
pub fn robust_portfolio(m: &EvalMatrix, budget_s: f64, slot_s: f64, p: &RobustParams, exec: Exec) -> Result<RobustOutcome, EvalError> {
    if m.is_empty() {
        return Err(EvalError::EmptyMatrix);
    }
    let n = m.problems.len();
    if n < 4 {
        return Err(EvalError::TooFewProblems(n));
    }
    let slots = check_slots(budget_s, slot_s)?;
    let all: Vec<usize> = (0..n).collect();
    let mut cands: Vec<(usize, Candidate)> = par::map_range(exec, p.n_splits.max(1), |i| {
        let (d1, d2) = halves(n, &mut split_rng(p.seed, 1, i));
        let c = cover_on(m, &d1, slots, slot_s, budget_s);
        let s = c.schedule;
        let cand = Candidate { d1: solved_percent(m, &s, &d1), d2: solved_percent(m, &s, &d2), d: solved_percent(m, &s, &all), schedule: s, passes: 0 };
        (i, cand)
    })
    .into_iter()
    .collect();
    let key = |c: &Candidate| c.d2 - (c.d1 - c.d2).max(0.0);
    cands.sort_by(|a, b| key(&b.1).total_cmp(&key(&a.1)).then(a.0.cmp(&b.0)));
    let mut top: Vec<Candidate> = Vec::new();
    for (_, c) in cands {
        if top.len() >= p.top_k.max(1) {
            break;
        }
        if !top.iter().any(|t| t.schedule.slices() == c.schedule.slices()) {
            top.push(c);
        }
    }
    let threshold = p.balance_threshold.unwrap_or_else(|| top.iter().map(|c| c.d).fold(f64::NEG_INFINITY, f64::max) - 1.0);
    let tests: Vec<(Vec<usize>, Vec<usize>)> = (0..p.extra_splits).map(|i| halves(n, &mut split_rng(p.seed, 2, i))).collect();
    let passes = par::map(exec, &top, |c| {
        tests
            .iter()
            .map(|(h1, h2)| {
                usize::from(solved_percent(m, &c.schedule, h1) >= threshold) + usize::from(solved_percent(m, &c.schedule, h2) >= threshold)
            })
            .sum::<usize>()
    });
    for (c, k) in top.iter_mut().zip(passes) {
        c.passes = k;
    }
    let mut best = 0;
    for (i, c) in top.iter().enumerate() {
        let b = &top[best];
        if c.passes > b.passes || (c.passes == b.passes && c.d > b.d) {
            best = i;
        }
    }
    Ok(RobustOutcome { winner: top[best].clone(), candidates: top, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[(&str, &[bool])]) -> EvalMatrix {
        let n = rows[0].1.len();
        let mut m = EvalMatrix::new(Vec::new(), (0..n).map(|i| format!("p{i}")).collect());
        for (id, r) in rows {
            m.push_row(id, r.iter().map(|&b| b.then_some(1.0)).collect());
        }
        m
    }

    #[test]
    fn single_slice_solving_everything() {
        let m = matrix(&[("a", &[true, true, true]), ("b", &[true, false, false])]);
        let c = greedy_cover(&m, 10.0, 2.0).unwrap();
        assert_eq!(c.schedule.slices(), ["a"]);
    }

    #[test]
    fn disjoint_slices() {
        let m = matrix(&[("A", &[true, true, false]), ("B", &[false, false, true])]);
        let c = greedy_cover(&m, 4.0, 2.0).unwrap();
        assert_eq!(c.schedule.slices(), ["A", "B"]);
        assert_eq!(c.gains, [2, 1]);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(greedy_cover(&EvalMatrix::default(), 4.0, 2.0).unwrap_err(), EvalError::EmptyMatrix);
        let m = matrix(&[("A", &[true, true, false])]);
        assert!(matches!(greedy_cover(&m, 5.0, 2.0), Err(EvalError::BadSlots { .. })));
        let p = RobustParams { n_splits: 4, ..Default::default() };
        assert_eq!(robust_portfolio(&m, 4.0, 2.0, &p, Exec::Sequential).unwrap_err(), EvalError::TooFewProblems(3));
    }

    #[test]
    fn identical_slices_degenerate() {
        let row = [true, false, true, true, false, true];
        let m = matrix(&[("s", &row), ("t", &row)]);
        let p = RobustParams { n_splits: 20, extra_splits: 5, ..Default::default() };
        let out = robust_portfolio(&m, 2.0, 1.0, &p, Exec::Sequential).unwrap();
        assert_eq!(out.winner.schedule.slices(), ["s"]);
    }
}

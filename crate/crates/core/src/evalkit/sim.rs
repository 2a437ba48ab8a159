//! Synthetic solver matrices with planted overfitting traps.
//!
//! Problems carry a hidden type. A *good* slice solves every problem of the
//! types it knows, on any problem set. A *trap* slice solves a random subset of
//! whatever problems it is shown, drawn independently for each set, so what it
//! solves on one set says nothing about another.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::EvalMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSimParams {
    pub devel_problems: usize,
    pub holdout_problems: usize,
    pub types: usize,
    pub good_slices: usize,
    /// Types known by each good slice.
    pub types_per_slice: usize,
    pub trap_slices: usize,
    /// Fraction of a set solved by a trap slice.
    pub trap_rate: f64,
    /// Solve times are drawn uniformly from `(0, time_limit]`.
    pub time_limit: f64,
}

impl Default for TrapSimParams {
    fn default() -> Self {
        TrapSimParams {
            devel_problems: 120,
            holdout_problems: 120,
            types: 16,
            good_slices: 8,
            types_per_slice: 3,
            trap_slices: 24,
            trap_rate: 0.5,
            time_limit: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapSim {
    pub devel: EvalMatrix,
    pub holdout: EvalMatrix,
}

pub fn planted_trap_matrices(p: &TrapSimParams, seed: u64) -> TrapSim {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let known: Vec<Vec<usize>> =
        (0..p.good_slices).map(|_| sample(&mut rng, p.types, p.types_per_slice.min(p.types)).into_vec()).collect();
    let slices: Vec<String> = (0..p.good_slices).map(|i| format!("good{i:02}")).chain((0..p.trap_slices).map(|i| format!("trap{i:02}"))).collect();
    let build = |prefix: &str, n: usize, rng: &mut ChaCha8Rng| {
        let types: Vec<usize> = (0..n).map(|_| rng.gen_range(0..p.types)).collect();
        let mut m = EvalMatrix::new(Vec::new(), (0..n).map(|i| format!("{prefix}{i:03}")).collect());
        for (s, id) in slices.iter().enumerate() {
            let row: Vec<Option<f64>> = if s < p.good_slices {
                types.iter().map(|t| known[s].contains(t).then(|| rng.gen_range(0.0..p.time_limit).max(1e-3))).collect()
            } else {
                let k = ((n as f64) * p.trap_rate).round() as usize;
                let hit = sample(rng, n, k.min(n)).into_vec();
                let mut row = vec![None; n];
                for j in hit {
                    row[j] = Some(rng.gen_range(0.0..p.time_limit).max(1e-3));
                }
                row
            };
            m.push_row(id, row);
        }
        m
    };
    let devel = build("d", p.devel_problems, &mut rng);
    let holdout = build("h", p.holdout_problems, &mut rng);
    TrapSim { devel, holdout }
}

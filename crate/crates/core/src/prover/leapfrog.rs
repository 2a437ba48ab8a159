//! Restarting drivers: leapfrogging and split/merge.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::saturate::{saturate, SaturationResult, Status};
use super::strategy::Strategy;
use crate::corpus::{Clause, Origin, Rule};
use crate::features::{featurize_literals, FeatureConfig, SparseVector};

/// Picks which derived clauses survive into the next run.
pub trait ClauseSelector {
    /// Indices into `candidates` of at most `m` clauses, best first.
    fn select(&self, query: &[Clause], candidates: &[Clause], m: usize) -> Vec<usize>;
}

/// Cosine similarity of clause features to the summed conjecture features.
#[derive(Debug, Clone, Default)]
pub struct SimilaritySelector {
    pub features: FeatureConfig,
}

impl ClauseSelector for SimilaritySelector {
    fn select(&self, query: &[Clause], candidates: &[Clause], m: usize) -> Vec<usize> {
        let b = self.features.hash_base;
        let q = query
            .iter()
            .fold(SparseVector::new(), |acc, c| acc.add(&featurize_literals(&c.literals, &self.features)))
            .hashed_part(b);
        let qn = q.norm();
        let mut scored: Vec<(usize, f64)> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = featurize_literals(&c.literals, &self.features).hashed_part(b);
                let d = qn * v.norm();
                (i, if d > 0.0 { q.dot(&v) / d } else { 0.0 })
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.into_iter().take(m).map(|x| x.0).collect()
    }
}

#[derive(Debug, Clone)]
pub struct LeapfrogResult {
    pub result: SaturationResult,
    /// Input clauses of every round that was run.
    pub round_inputs: Vec<Vec<Clause>>,
}

fn is_conjecture(c: &Clause) -> bool {
    c.rule == Rule::Input && c.origin == Origin::ConjectureDerived
}

/// Conjecture clauses followed by the kept clauses, renumbered as fresh inputs.
fn restart_input(conjecture: &[Clause], kept: impl IntoIterator<Item = Clause>) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for c in conjecture.iter().cloned().chain(kept) {
        if out.iter().any(|o| o.literals == c.literals) {
            continue;
        }
        let origin = if is_conjecture(&c) { Origin::ConjectureDerived } else { Origin::Axiom };
        out.push(Clause::input(out.len(), c.literals, origin));
    }
    out
}

fn processed_non_conjecture(r: &SaturationResult) -> Vec<Clause> {
    r.processed().filter(|c| !is_conjecture(c)).cloned().collect()
}

/// Saturates with the strategy's budget per round; between rounds only the
/// conjecture clauses and the `keep` best processed clauses are carried over.
pub fn leapfrog(input: &[Clause], strategy: &Strategy, rounds: usize, keep: &dyn ClauseSelector, m: usize) -> LeapfrogResult {
    let conjecture: Vec<Clause> = input.iter().filter(|c| is_conjecture(c)).cloned().collect();
    let mut current = input.to_vec();
    let mut round_inputs = Vec::new();
    loop {
        let r = saturate(&current, strategy);
        round_inputs.push(current);
        if r.status != Status::BudgetOut || round_inputs.len() >= rounds.max(1) {
            return LeapfrogResult { result: r, round_inputs };
        }
        let candidates = processed_non_conjecture(&r);
        let picked = keep.select(&conjecture, &candidates, m);
        current = restart_input(&conjecture, picked.into_iter().map(|i| candidates[i].clone()));
    }
}

/// Runs the first round, splits its processed clauses into `components` random
/// parts, saturates each part with the conjecture, and finishes on the merged
/// selection of all parts' processed clauses.
pub fn split_merge(
    input: &[Clause],
    strategy: &Strategy,
    components: usize,
    keep: &dyn ClauseSelector,
    m: usize,
    seed: u64,
) -> LeapfrogResult {
    let conjecture: Vec<Clause> = input.iter().filter(|c| is_conjecture(c)).cloned().collect();
    let first = saturate(input, strategy);
    let mut round_inputs = vec![input.to_vec()];
    if first.status != Status::BudgetOut {
        return LeapfrogResult { result: first, round_inputs };
    }
    let mut pool = processed_non_conjecture(&first);
    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let c = components.max(1);
    let mut merged: Vec<Clause> = Vec::new();
    for k in 0..c {
        let part: Vec<Clause> = pool.iter().skip(k).step_by(c).cloned().collect();
        let inp = restart_input(&conjecture, part);
        let r = saturate(&inp, strategy);
        round_inputs.push(inp);
        if r.status == Status::Unsat {
            return LeapfrogResult { result: r, round_inputs };
        }
        merged.extend(processed_non_conjecture(&r));
    }
    let picked = keep.select(&conjecture, &merged, m);
    let inp = restart_input(&conjecture, picked.into_iter().map(|i| merged[i].clone()));
    let r = saturate(&inp, strategy);
    round_inputs.push(inp);
    LeapfrogResult { result: r, round_inputs }
}

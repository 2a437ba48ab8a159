//! Sparse Naive Bayes premise selection.
//!
//! For a conjecture with feature set `C`, a fact `F` is scored as
//!
//! ```text
//! σ_prior·ln(K(F)+1)
//!   + Σ_{f ∈ C ∩ ext(F)} σ_pos·ln((t(f,F)+μ) / (K(F)+2μ))
//!   + Σ_{f ∈ C \ ext(F)} σ_neg·ln(μ / (K(F)+2μ))
//! ```
//!
//! where `K(F)` counts the proofs using `F`, `t(f,F)` those proofs whose theorem
//! has feature `f`, and `ext(F)` is the set of features of theorems proved with
//! `F` (plus `F`'s own features in extended mode).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::index::FactIndex;
use super::{Ranking, SelectorError};
use crate::corpus::{chronology_filter, Corpus, DependencyDb, Fact};
use crate::features::FeatureConfig;
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbParams {
    pub sigma_prior: f64,
    pub sigma_pos: f64,
    pub sigma_neg: f64,
    /// Laplace smoothing constant.
    pub mu: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { sigma_prior: 2.0, sigma_pos: 1.0, sigma_neg: 0.05, mu: 1.0 }
    }
}

/// Per-fact usage statistics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NbCounts {
    /// `K(F)` by serial.
    pub uses: Vec<u32>,
    /// `t(f, F)` by serial.
    pub co_uses: Vec<HashMap<u32, u32>>,
    /// `ext(F)` by serial.
    pub ext: Vec<HashSet<u32>>,
}

#[derive(Debug, Clone)]
pub struct NbModel {
    index: Arc<FactIndex>,
    corpus: Arc<Corpus>,
    features: Vec<BTreeSet<u32>>,
    deps: DependencyDb,
    counts: NbCounts,
    pub extended: bool,
    pub params: NbParams,
}

fn count(index: &FactIndex, features: &[BTreeSet<u32>], db: &DependencyDb, extended: bool) -> NbCounts {
    let n = index.len();
    let mut c = NbCounts { uses: vec![0; n], co_uses: vec![HashMap::new(); n], ext: vec![HashSet::new(); n] };
    if extended {
        for (s, f) in features.iter().enumerate() {
            c.ext[s].extend(f.iter().copied());
        }
    }
    for (theorem, proofs) in db.iter() {
        let Some(ts) = index.serial(theorem) else { continue };
        let tf = &features[ts];
        for p in proofs {
            for prem in &p.premises {
                let Some(ps) = index.serial(prem) else { continue };
                c.uses[ps] += 1;
                let co = &mut c.co_uses[ps];
                for &f in tf {
                    *co.entry(f).or_insert(0) += 1;
                }
                c.ext[ps].extend(tf.iter().copied());
            }
        }
    }
    c
}

pub fn train_nb(corpus: Arc<Corpus>, db: &DependencyDb, cfg: &FeatureConfig, extended: bool, params: NbParams) -> Result<NbModel, SelectorError> {
    let index = Arc::new(FactIndex::build(&corpus, cfg, Exec::auto()));
    train_nb_with_index(corpus, index, db, extended, params)
}

pub fn train_nb_with_index(
    corpus: Arc<Corpus>,
    index: Arc<FactIndex>,
    db: &DependencyDb,
    extended: bool,
    params: NbParams,
) -> Result<NbModel, SelectorError> {
    if db.is_empty() {
        return Err(SelectorError::EmptyDb);
    }
    let base = index.cfg.hash_base;
    let features: Vec<BTreeSet<u32>> = (0..index.len()).map(|s| index.hashed(s).hashed_indices(base).collect()).collect();
    let counts = count(&index, &features, db, extended);
    Ok(NbModel { index, corpus, features, deps: db.clone(), counts, extended, params })
}

impl NbModel {
    pub fn counts(&self) -> &NbCounts {
        &self.counts
    }

    pub fn features(&self, serial: usize) -> &BTreeSet<u32> {
        &self.features[serial]
    }

    pub fn index(&self) -> &Arc<FactIndex> {
        &self.index
    }

    /// Score of the fact with the given serial under explicit counts.
    pub fn score_with(&self, counts: &NbCounts, serial: usize, conjecture: &BTreeSet<u32>) -> f64 {
        let p = &self.params;
        let k = f64::from(counts.uses[serial]);
        let denom = k + 2.0 * p.mu;
        let mut score = p.sigma_prior * (k + 1.0).ln();
        for f in conjecture {
            if counts.ext[serial].contains(f) {
                let t = f64::from(counts.co_uses[serial].get(f).copied().unwrap_or(0));
                score += p.sigma_pos * ((t + p.mu) / denom).ln();
            } else {
                score += p.sigma_neg * (p.mu / denom).ln();
            }
        }
        score
    }

    pub fn conjecture_features(&self, conjecture: &Fact) -> BTreeSet<u32> {
        self.index.hashed_for(conjecture).hashed_indices(self.index.cfg.hash_base).collect()
    }

    pub fn predict(&self, conjecture: &Fact, n_requested: usize, chronological: bool) -> Result<Ranking, SelectorError> {
        if n_requested == 0 {
            return Err(SelectorError::BadRequest("n_requested must be >= 1".into()));
        }
        let chrono_counts;
        let counts = if chronological {
            let db = chronology_filter(&self.deps, &self.corpus, conjecture.serial);
            chrono_counts = count(&self.index, &self.features, &db, self.extended);
            &chrono_counts
        } else {
            &self.counts
        };
        let c = self.conjecture_features(conjecture);
        let items: Vec<(String, f64)> = (0..self.index.len())
            .filter(|&s| self.index.name(s) != conjecture.name && (!chronological || s < conjecture.serial))
            .map(|s| (self.index.name(s).to_string(), self.score_with(counts, s, &c)))
            .collect();
        let mut r = Ranking::sorted_by_score(items, |n| self.index.order_key(n), true);
        r.truncate(n_requested);
        Ok(r)
    }
}

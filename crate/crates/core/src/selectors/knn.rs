//! k-nearest-neighbour premise selection over TF-IDF weighted formula features.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::index::FactIndex;
use super::{Ranking, SelectorError};
use crate::corpus::{chronology_filter, Corpus, DependencyDb, Fact};
use crate::features::{FeatureConfig, SparseVector};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnParams {
    /// Weight of a neighbour's dependencies.
    pub tau_dep: f64,
    /// Weight of the neighbour itself.
    pub tau_self: f64,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { tau_dep: 1.0, tau_self: 1.0 }
    }
}

/// Neighbourhood size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K {
    Fixed(usize),
    /// Start at 4 and double until enough facts are scored.
    Var,
}

pub const VAR_K_START: usize = 4;

#[derive(Debug, Clone)]
pub struct KnnModel {
    index: Arc<FactIndex>,
    corpus: Arc<Corpus>,
    idf: HashMap<u32, f64>,
    /// idf-weighted hashed vectors per serial.
    weighted: Vec<SparseVector>,
    norms: Vec<f64>,
    deps: DependencyDb,
    pub params: KnnParams,
}

pub fn train_knn(corpus: Arc<Corpus>, db: &DependencyDb, cfg: &FeatureConfig, params: KnnParams) -> Result<KnnModel, SelectorError> {
    let index = Arc::new(FactIndex::build(&corpus, cfg, Exec::auto()));
    train_knn_with_index(corpus, index, db, params)
}

pub fn train_knn_with_index(
    corpus: Arc<Corpus>,
    index: Arc<FactIndex>,
    db: &DependencyDb,
    params: KnnParams,
) -> Result<KnnModel, SelectorError> {
    if db.is_empty() {
        return Err(SelectorError::EmptyDb);
    }
    let n = index.len() as f64;
    let mut df: HashMap<u32, usize> = HashMap::new();
    for s in 0..index.len() {
        for i in index.hashed(s).hashed_indices(index.cfg.hash_base) {
            *df.entry(i).or_insert(0) += 1;
        }
    }
    let idf: HashMap<u32, f64> = df.into_iter().map(|(i, d)| (i, (n / d as f64).ln())).collect();
    let weighted: Vec<SparseVector> = (0..index.len()).map(|s| weigh(index.hashed(s), &idf)).collect();
    let norms = weighted.iter().map(SparseVector::norm).collect();
    Ok(KnnModel { index, corpus, idf, weighted, norms, deps: db.clone(), params })
}

fn weigh(v: &SparseVector, idf: &HashMap<u32, f64>) -> SparseVector {
    SparseVector::from_pairs(v.entries().iter().map(|&(i, x)| (i, x * idf.get(&i).copied().unwrap_or(0.0))).collect())
}

impl KnnModel {
    pub fn idf(&self, index: u32) -> f64 {
        self.idf.get(&index).copied().unwrap_or(0.0)
    }

    pub fn index(&self) -> &Arc<FactIndex> {
        &self.index
    }

    pub fn corpus(&self) -> &Arc<Corpus> {
        &self.corpus
    }

    pub fn deps(&self) -> &DependencyDb {
        &self.deps
    }

    /// Cosine similarity of the conjecture to every admissible neighbour, best first
    /// (ties by serial).
    pub fn neighbours(&self, conjecture: &Fact, chronological: bool) -> Vec<(usize, f64)> {
        let q = weigh(&self.index.hashed_for(conjecture), &self.idf);
        let qn = q.norm();
        let mut sims: Vec<(usize, f64)> = (0..self.index.len())
            .filter(|&s| self.index.name(s) != conjecture.name && (!chronological || s < conjecture.serial))
            .map(|s| {
                let denom = qn * self.norms[s];
                let sim = if denom > 0.0 { q.dot(&self.weighted[s]) / denom } else { 0.0 };
                (s, sim)
            })
            .collect();
        sims.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        sims
    }

    fn accumulate(&self, neighbours: &[(usize, f64)], deps: &DependencyDb, conjecture: &Fact, chronological: bool) -> HashMap<usize, f64> {
        let mut scores: HashMap<usize, f64> = HashMap::new();
        let admissible = |s: usize| self.index.name(s) != conjecture.name && (!chronological || s < conjecture.serial);
        for &(t, sim) in neighbours {
            *scores.entry(t).or_insert(0.0) += self.params.tau_self * sim;
            let name = self.index.name(t);
            let tdeps: BTreeSet<String> = deps.all_premises(name);
            if tdeps.is_empty() {
                continue;
            }
            let share = self.params.tau_dep * sim / tdeps.len() as f64;
            for d in &tdeps {
                if let Some(ds) = self.index.serial(d) {
                    if admissible(ds) {
                        *scores.entry(ds).or_insert(0.0) += share;
                    }
                }
            }
        }
        scores
    }

    /// Ranks facts for the conjecture: each neighbour `t` adds `tau_self * sim(t)`
    /// to itself and `tau_dep * sim(t) / |deps(t)|` to each of its dependencies.
    pub fn predict(&self, conjecture: &Fact, k: K, n_requested: usize, chronological: bool) -> Result<Ranking, SelectorError> {
        if n_requested == 0 {
            return Err(SelectorError::BadRequest("n_requested must be >= 1".into()));
        }
        let filtered;
        let deps = if chronological {
            filtered = chronology_filter(&self.deps, &self.corpus, conjecture.serial);
            &filtered
        } else {
            &self.deps
        };
        let neighbours = self.neighbours(conjecture, chronological);
        let scores = match k {
            K::Fixed(k) => self.accumulate(&neighbours[..k.min(neighbours.len())], deps, conjecture, chronological),
            K::Var => {
                let mut k = VAR_K_START;
                loop {
                    let s = self.accumulate(&neighbours[..k.min(neighbours.len())], deps, conjecture, chronological);
                    if s.len() >= n_requested || k >= neighbours.len() {
                        break s;
                    }
                    k *= 2;
                }
            }
        };
        let items: Vec<(String, f64)> = scores.into_iter().map(|(s, x)| (self.index.name(s).to_string(), x)).collect();
        let mut r = Ranking::sorted_by_score(items, |n| self.index.order_key(n), true);
        r.truncate(n_requested);
        Ok(r)
    }
}

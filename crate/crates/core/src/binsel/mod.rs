//! Binary premise selection: k-NN preselection, negative mining, boosted trees
//! over (conjecture, premise) pair vectors, and reranking.

mod gbdt;

pub use gbdt::{sigmoid, train_gbdt, train_gbdt_with, GbdtError, GbdtModel, GbdtParams, Growth, Node, PairExample, Tree, TrainLog};

use std::collections::BTreeSet;

use log::warn;
use thiserror::Error;

use crate::corpus::{Corpus, DependencyDb, Fact};
use crate::features::{pair_vector, FeatureConfig, SparseVector};
use crate::par::{self, Exec};
use crate::selectors::{KnnModel, Ranking, SelectorError, K};

pub const PRESELECT: usize = 512;

/// Pair vector of a conjecture and a candidate premise, both given as full formula vectors.
pub fn premise_pair(conjecture: &SparseVector, candidate: &SparseVector, cfg: &FeatureConfig) -> SparseVector {
    pair_vector(conjecture, candidate, None, cfg)
}

/// One positive example per true dependency and one negative per remaining
/// k-NN candidate, for every theorem of `theorems` found in `db`.
pub fn assemble_training_pairs<'a>(
    corpus: &Corpus,
    db: &DependencyDb,
    knn: &KnnModel,
    theorems: impl IntoIterator<Item = &'a str>,
    preselect: usize,
) -> Vec<PairExample> {
    let index = knn.index();
    let cfg = &index.cfg;
    let mut out = Vec::new();
    for t in theorems {
        let Some(fact) = corpus.get(t) else { continue };
        let positives = db.all_premises(t);
        if positives.is_empty() {
            warn!("theorem {t} has no dependencies; skipped");
            continue;
        }
        let candidates = match knn.predict(fact, K::Var, preselect.max(1), false) {
            Ok(r) => r,
            Err(e) => {
                warn!("no k-NN candidates for {t}: {e}");
                continue;
            }
        };
        let cv = index.vector_for(fact);
        for p in &positives {
            if let Some(s) = index.serial(p) {
                out.push(PairExample { vector: premise_pair(&cv, index.vector(s), cfg), positive: true });
            }
        }
        for n in candidates.names().filter(|n| !positives.contains(*n)) {
            if let Some(s) = index.serial(n) {
                out.push(PairExample { vector: premise_pair(&cv, index.vector(s), cfg), positive: false });
            }
        }
    }
    out
}

/// Positive and negative candidate names for one theorem, as used by [`assemble_training_pairs`].
pub fn mined_sets(db: &DependencyDb, knn: &KnnModel, theorem: &Fact, preselect: usize) -> Result<(BTreeSet<String>, BTreeSet<String>), SelectorError> {
    let positives = db.all_premises(&theorem.name);
    let candidates = knn.predict(theorem, K::Var, preselect.max(1), false)?;
    let negatives = candidates.names().filter(|n| !positives.contains(*n)).map(str::to_string).collect();
    Ok((positives, negatives))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RerankMode {
    /// Keep candidates whose probability is strictly above the threshold.
    Threshold(f64),
    TopN(usize),
}

/// Scores the k-NN preselection of `conjecture` with the model.
pub fn rerank(model: &GbdtModel, knn: &KnnModel, conjecture: &Fact, mode: RerankMode, preselect: usize, exec: Exec) -> Result<Ranking, SelectorError> {
    let index = knn.index();
    let candidates = knn.predict(conjecture, K::Var, preselect.max(1), false)?;
    let cv = index.vector_for(conjecture);
    let names: Vec<&str> = candidates.names().collect();
    let scores = par::map(exec, &names, |n| {
        let s = index.serial(n).expect("candidate from index");
        model.predict(&premise_pair(&cv, index.vector(s), &index.cfg))
    });
    let items: Vec<(String, f64)> = names.iter().zip(scores).map(|(n, s)| (n.to_string(), s)).collect();
    let mut r = Ranking::sorted_by_score(items, |n| index.order_key(n), true);
    match mode {
        RerankMode::Threshold(theta) => r = r.filter(|_, s| s > theta),
        RerankMode::TopN(n) => r.truncate(n),
    }
    Ok(r)
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreFileError {
    #[error("line {line}: expected `fact score`")]
    Malformed { line: usize },
    #[error("line {line}: duplicate fact `{name}`")]
    Duplicate { line: usize, name: String },
}

/// Reads externally computed premise scores (`fact score` per line, `#` comments)
/// into a ranking, best first with ties broken by `order_key`.
pub fn parse_score_file(text: &str, order_key: impl Fn(&str) -> usize) -> Result<Ranking, ScoreFileError> {
    let mut items = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(score), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ScoreFileError::Malformed { line: i + 1 });
        };
        let score: f64 = score.parse().ok().filter(|s: &f64| s.is_finite()).ok_or(ScoreFileError::Malformed { line: i + 1 })?;
        if !seen.insert(name.to_string()) {
            return Err(ScoreFileError::Duplicate { line: i + 1, name: name.to_string() });
        }
        items.push((name.to_string(), score));
    }
    Ok(Ranking::sorted_by_score(items, order_key, true))
}

pub fn write_score_file(r: &Ranking) -> String {
    r.items().iter().map(|(n, s)| format!("{n} {s:?}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_file_round_trip() {
        let r = parse_score_file("b 0.5\na 0.5 # tie\nc 0.75\n", |n| (n.as_bytes()[0] - b'a') as usize).unwrap();
        assert_eq!(r.names().collect::<Vec<_>>(), ["c", "a", "b"]);
        let back = parse_score_file(&write_score_file(&r), |_| 0).unwrap();
        assert_eq!(back.items(), r.items());
        assert!(matches!(parse_score_file("a\n", |_| 0), Err(ScoreFileError::Malformed { line: 1 })));
        assert!(matches!(parse_score_file("a 1\na 2\n", |_| 0), Err(ScoreFileError::Duplicate { .. })));
    }
}

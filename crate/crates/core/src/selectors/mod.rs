//! Multilabel premise selection: k-NN and sparse Naive Bayes.

mod index;
mod knn;
mod nb;
mod ranking;

pub use index::FactIndex;
pub use knn::{train_knn, train_knn_with_index, KnnModel, KnnParams, K, VAR_K_START};
pub use nb::{train_nb, train_nb_with_index, NbCounts, NbModel, NbParams};
pub use ranking::{parse_rankings, write_rankings, Ranking, RankingFileError};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SelectorError {
    #[error("dependency database is empty")]
    EmptyDb,
    #[error("bad request: {0}")]
    BadRequest(String),
}

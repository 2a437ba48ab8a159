//! Learning-guided theorem proving workbench.
//!
//! The crate covers the whole prove/learn pipeline at desk scale:
//!
//! - [`corpus`]: TPTP parsing, the ordered fact corpus, proof dependencies, splits
//! - [`features`]: hashed sparse clause and formula features
//! - [`selectors`]: k-NN and Naive Bayes premise selection
//! - [`binsel`]: gradient-boosted trees for pairwise premise relevance
//! - [`ensemble`]: weighted rank fusion
//! - [`prover`]: a resolution prover with learned clause guidance
//! - [`evalkit`]: ranking metrics, greedy covers and robust portfolios
//!
//! Data-parallel loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iterators otherwise.

pub mod binsel;
pub mod corpus;
pub mod ensemble;
pub mod evalkit;
pub mod features;
pub mod par;
pub mod prover;
pub mod selectors;
pub mod synth;

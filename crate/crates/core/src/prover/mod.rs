//! Resolution prover with learned clause guidance.

mod calculus;
mod clausify;
mod leapfrog;
mod proof;
mod saturate;
mod strategy;
mod unify;

pub use calculus::{factors, is_tautology, normalize, resolvents, subsumes, symbol_weight, Resolvent};
pub use clausify::{clausify, clausify_formula, clausify_with_sources, ClausifyOptions};
pub use leapfrog::{leapfrog, split_merge, ClauseSelector, LeapfrogResult, SimilaritySelector};
pub use proof::{extract_training, parse_derivation, print_derivation, proof_is_well_formed, ProofError, TrainingSet, TrainingView};
pub use saturate::{clause_vector, conjecture_vector, parental_vector, saturate, SaturationResult, Stats, Status};
pub use strategy::{ClauseScorer, ConstantScorer, QueueKind, Strategy, StrategyError};
pub use unify::{shift_vars, Subst};

use crate::corpus::{Clause, Problem};

/// Clauses of a problem: premises first, then the negated conjecture.
pub fn problem_clauses(problem: &Problem, opts: &ClausifyOptions) -> Vec<Clause> {
    clausify(&problem.facts(), opts)
}

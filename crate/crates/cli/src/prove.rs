//! Building proof attempts from rankings and reading premises back from proofs.

use std::collections::BTreeSet;

use lgp_core::corpus::{Corpus, Fact, Problem, Role, Rule};
use lgp_core::prover::{clausify_with_sources, saturate, ClausifyOptions, SaturationResult, Status, Strategy};
use lgp_core::selectors::Ranking;

/// The theorem as a conjecture over the ranked premises.
pub fn problem_for(corpus: &Corpus, theorem: &Fact, premises: &Ranking) -> Problem {
    let premises = premises.names().filter_map(|n| corpus.get(n)).cloned().collect();
    Problem { conjecture: Fact { role: Role::Conjecture, ..theorem.clone() }, premises }
}

pub struct Attempt {
    pub result: SaturationResult,
    /// Names of the premises used by the proof, when one was found.
    pub used: Option<BTreeSet<String>>,
}

pub fn attempt(problem: &Problem, strategy: &Strategy) -> Attempt {
    let facts = problem.facts();
    let (clauses, sources) = clausify_with_sources(&facts, &ClausifyOptions::default());
    let result = saturate(&clauses, strategy);
    let used = (result.status == Status::Unsat).then(|| {
        let proof = result.proof.as_deref().unwrap_or_default();
        proof
            .iter()
            .filter(|c| c.rule == Rule::Input)
            .filter_map(|c| sources.get(c.id).copied().flatten())
            .filter(|&i| i + 1 < facts.len())
            .map(|i| facts[i].name.clone())
            .collect()
    });
    Attempt { result, used }
}

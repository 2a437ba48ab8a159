//! Premise sets assembled from the ATP-proved subproblems of a theorem.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::selectors::Ranking;

#[derive(Debug, Error, PartialEq)]
#[error("minimization variant must be 1..=4, got {0}")]
pub struct BadVariant(pub u8);

/// Default number of top-ranked background premises added by variant 4.
pub const DEFAULT_TOP_B: usize = 32;

/// Inputs describing one theorem's subproblems.
#[derive(Debug, Clone, Default)]
pub struct SubproblemEvidence {
    /// ATP dependencies of the subproblems that were proved.
    pub subproblem_deps: Vec<BTreeSet<String>>,
    /// Premises referenced explicitly by the proof.
    pub explicit: BTreeSet<String>,
    /// Definitional expansions and similar implicit premises.
    pub expansions: BTreeSet<String>,
}

/// Each variant adds to the previous one: (1) union of proved-subproblem deps,
/// (2) plus explicit references, (3) plus expansions, (4) plus the `top_b` best
/// background premises.
pub fn minimize_premises(
    evidence: &SubproblemEvidence,
    ranked_background: &Ranking,
    variant: u8,
    top_b: usize,
) -> Result<BTreeSet<String>, BadVariant> {
    if !(1..=4).contains(&variant) {
        return Err(BadVariant(variant));
    }
    let mut out: BTreeSet<String> = evidence.subproblem_deps.iter().flatten().cloned().collect();
    if variant >= 2 {
        out.extend(evidence.explicit.iter().cloned());
    }
    if variant >= 3 {
        out.extend(evidence.expansions.iter().cloned());
    }
    if variant >= 4 {
        out.extend(ranked_background.names().take(top_b).map(str::to_string));
    }
    Ok(out)
}

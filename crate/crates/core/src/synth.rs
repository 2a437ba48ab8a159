//! Seeded synthetic corpora and problems.
//!
//! The library generator interleaves ground facts `pI(s(cJ))`, Horn rules over
//! unary predicates and theorems obtained by forward chaining from what came
//! before; each theorem's dependencies are the named facts of its derivation.
//! Every argument sits under the wrapper `s`, so facts, rules and theorems about
//! one predicate share the feature `pI(s)`.
//! The guidance family produces problems whose refutation needs only `p`
//! clauses while `r` rules keep generating lighter, irrelevant consequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{parse_tptp, Corpus, DependencyDb, Provenance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LibraryParams {
    pub facts: usize,
    pub predicates: usize,
    pub constants: usize,
    /// Maximal derivation depth of a theorem.
    pub depth: usize,
}

impl Default for LibraryParams {
    fn default() -> Self {
        LibraryParams { facts: 200, predicates: 40, constants: 12, depth: 3 }
    }
}

#[derive(Debug, Clone)]
pub struct SynthLibrary {
    pub text: String,
    pub corpus: Corpus,
    pub deps: DependencyDb,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Rule {
    Single { from: usize, to: usize },
    Pair { a: usize, b: usize, to: usize },
}

/// Predicates derivable for one constant within `depth` rule applications,
/// with the smallest justification found, excluding those already known.
/// Rules are unary in the shared variable, so constants never interact.
fn derivable(known: &BTreeMap<usize, BTreeSet<String>>, rules: &[(String, Rule)], depth: usize) -> BTreeMap<usize, BTreeSet<String>> {
    let mut all = known.clone();
    let mut fresh: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for _ in 0..depth {
        let mut round: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (name, rule) in rules {
            let derived = match *rule {
                Rule::Single { from, to } => all.get(&from).map(|j| (to, j.clone())),
                Rule::Pair { a, b, to } => all.get(&a).zip(all.get(&b)).map(|(ja, jb)| (to, ja.union(jb).cloned().collect())),
            };
            let Some((to, mut just)) = derived else { continue };
            if all.contains_key(&to) {
                continue;
            }
            just.insert(name.clone());
            if round.get(&to).map_or(true, |old| just.len() < old.len()) {
                round.insert(to, just);
            }
        }
        if round.is_empty() {
            break;
        }
        for (k, j) in round {
            fresh.insert(k, j.clone());
            all.insert(k, j);
        }
    }
    fresh
}

pub fn synthetic_library(params: &LibraryParams, seed: u64) -> SynthLibrary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    let mut deps = DependencyDb::new();
    let (np, nc) = (params.predicates.max(2), params.constants.max(1));
    // per constant: known predicates and the named facts justifying them
    let mut known: Vec<BTreeMap<usize, BTreeSet<String>>> = vec![BTreeMap::new(); nc];
    let mut rules: Vec<(String, Rule)> = Vec::new();
    // derivable predicates per constant, recomputed only after a change
    let mut cache: Vec<Option<BTreeMap<usize, BTreeSet<String>>>> = vec![None; nc];
    let mut emitted = 0usize;
    while emitted < params.facts {
        let roll: f64 = rng.gen();
        let mut theorem = None;
        if roll >= 0.6 && !rules.is_empty() {
            let mut order: Vec<usize> = (0..nc).collect();
            order.shuffle(&mut rng);
            for c in order {
                let candidates = cache[c].get_or_insert_with(|| derivable(&known[c], &rules, params.depth.max(1)));
                if !candidates.is_empty() {
                    let keys: Vec<&usize> = candidates.keys().collect();
                    let p = *keys[rng.gen_range(0..keys.len())];
                    theorem = Some((p, c, candidates[&p].clone()));
                    break;
                }
            }
        }
        if let Some((p, c, just)) = theorem {
            let name = format!("t{emitted}");
            let _ = writeln!(text, "fof({name}, theorem, p{p}(s(c{c}))).");
            deps.insert(&name, just, Provenance::Human);
            known[c].insert(p, BTreeSet::from([name]));
            cache[c] = None;
        } else if (0.3..0.6).contains(&roll) && !known.iter().all(BTreeMap::is_empty) {
            let rule = if rng.gen_bool(0.7) {
                let from = rng.gen_range(0..np);
                let to = (from + rng.gen_range(1..np)) % np;
                Rule::Single { from, to }
            } else {
                let mut ps: Vec<usize> = (0..np).collect();
                ps.shuffle(&mut rng);
                Rule::Pair { a: ps[0], b: ps[1], to: ps[2] }
            };
            if rules.iter().any(|r| r.1 == rule) {
                continue;
            }
            let name = format!("r{emitted}");
            match rule {
                Rule::Single { from, to } => {
                    let _ = writeln!(text, "fof({name}, axiom, ! [X] : (p{from}(s(X)) => p{to}(s(X)))).");
                }
                Rule::Pair { a, b, to } => {
                    let _ = writeln!(text, "fof({name}, axiom, ! [X] : ((p{a}(s(X)) & p{b}(s(X))) => p{to}(s(X)))).");
                }
            }
            rules.push((name, rule));
            cache.iter_mut().for_each(|e| *e = None);
        } else {
            // ground fact; also the fallback when no theorem is derivable yet
            let (p, c) = (rng.gen_range(0..np), rng.gen_range(0..nc));
            if known[c].contains_key(&p) {
                continue;
            }
            let name = format!("a{emitted}");
            let _ = writeln!(text, "fof({name}, axiom, p{p}(s(c{c}))).");
            known[c].insert(p, BTreeSet::from([name]));
            cache[c] = None;
        }
        emitted += 1;
    }
    let corpus = Corpus::from_statements(parse_tptp(&text).expect("generated text parses")).expect("generated corpus is valid");
    SynthLibrary { text, corpus, deps }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// Length of the relevant implication chain.
    pub chain: usize,
    /// Number of distractor rules.
    pub distractors: usize,
    /// Constants the distractor facts range over.
    pub constants: usize,
    /// Nesting depth of the term the chain talks about.
    pub depth: usize,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams { chain: 4, distractors: 10, constants: 5, depth: 3 }
    }
}

/// A problem of the guidance family: the conjecture follows from a chain of
/// unary `p` rules about a nested term, while binary `r` facts and rules
/// produce many lighter, irrelevant clauses.
pub fn guidance_family_problem(params: &FamilyParams, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::new();
    let nc = params.constants.max(2);
    let mut term = format!("c{}", rng.gen_range(0..nc));
    for _ in 0..params.depth {
        term = format!("s({term})");
    }
    let mut chain: Vec<usize> = (0..8).collect();
    chain.shuffle(&mut rng);
    let chain = &chain[..params.chain.clamp(1, 7) + 1];
    let _ = writeln!(s, "fof(base, axiom, p{}({term})).", chain[0]);
    for (i, w) in chain.windows(2).enumerate() {
        let _ = writeln!(s, "fof(step{i}, axiom, ! [X] : (p{}(X) => p{}(X))).", w[0], w[1]);
    }
    for c in 0..nc {
        for d in 0..nc {
            if c != d && rng.gen_bool(0.5) {
                let _ = writeln!(s, "fof(e{c}_{d}, axiom, r0(c{c}, c{d})).");
            }
        }
    }
    for k in 0..params.distractors {
        let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let form = match rng.gen_range(0..3) {
            0 => format!("! [X, Y] : (r{a}(X, Y) => r{b}(Y, X))"),
            1 => format!("! [X, Y, Z] : ((r{a}(X, Y) & r{b}(Y, Z)) => r{}(X, Z))", rng.gen_range(0..4)),
            _ => format!("! [X, Y] : (r{a}(X, Y) => r{b}(X, f(Y)))"),
        };
        let _ = writeln!(s, "fof(d{k}, axiom, {form}).");
    }
    let _ = writeln!(s, "fof(goal, conjecture, p{}({term})).", chain[chain.len() - 1]);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_is_deterministic_and_chronological() {
        let p = LibraryParams { facts: 60, ..Default::default() };
        let a = synthetic_library(&p, 7);
        let b = synthetic_library(&p, 7);
        assert_eq!(a.text, b.text);
        assert_eq!(a.corpus.len(), 60);
        assert!(!a.deps.is_empty());
        for (t, proofs) in a.deps.iter() {
            let ts = a.corpus.serial(t).unwrap();
            for prem in &proofs[0].premises {
                assert!(a.corpus.serial(prem).unwrap() < ts);
            }
        }
    }

    #[test]
    fn family_problem_parses() {
        let text = guidance_family_problem(&FamilyParams::default(), 3);
        let sts = parse_tptp(&text).unwrap();
        assert!(sts.iter().any(|s| s.name == "goal"));
    }
}

mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use lgp_core::corpus::Term;
use lgp_core::features::*;
use lgp_core::prover::{clausify, ClausifyOptions};
use lgp_core::synth::{synthetic_library, LibraryParams};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn anonymized() -> FeatureConfig {
    FeatureConfig { anonymize: true, ..Default::default() }
}

fn sorted_strings(fs: &FeatureStrings) -> (Vec<String>, Vec<String>) {
    let (mut v, mut h) = (fs.vertical.clone(), fs.horizontal.clone());
    v.sort();
    h.sort();
    (v, h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn anonymized_vectors_ignore_symbol_names(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clause = random_clause(&mut rng);
        let renamed = Renaming::random(&mut rng).clause(&clause);
        prop_assert_eq!(featurize_literals(&clause, &anonymized()), featurize_literals(&renamed, &anonymized()));
    }

    #[test]
    fn variable_names_never_matter(seed in any::<u64>(), shift in 1u32..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clause = random_clause(&mut rng);
        let moved: Vec<_> = clause.iter().map(|l| l.map_vars(&mut |v| Term::Var(v + shift))).collect();
        let cfg = FeatureConfig::default();
        prop_assert_eq!(featurize_literals(&clause, &cfg), featurize_literals(&moved, &cfg));
    }

    #[test]
    fn literal_order_never_matters(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clause = random_clause(&mut rng);
        let mut shuffled = clause.clone();
        shuffled.shuffle(&mut rng);
        let cfg = FeatureConfig::default();
        prop_assert_eq!(
            sorted_strings(&clause_feature_strings(&clause, &cfg)),
            sorted_strings(&clause_feature_strings(&shuffled, &cfg))
        );
        prop_assert_eq!(featurize_literals(&clause, &cfg), featurize_literals(&shuffled, &cfg));
    }

    #[test]
    fn pair_vectors_keep_inputs_in_their_bands(seed in any::<u64>(), concat in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = FeatureConfig::default().with_kinds(&[
            FeatureKind::Vertical, FeatureKind::Horizontal, FeatureKind::Count, FeatureKind::Conjecture, FeatureKind::Parent,
        ]);
        cfg.hash_base = 1 << 10;
        if concat {
            cfg.parent_mode = ParentMode::Concat;
        }
        let b = cfg.hash_base;
        let v = |rng: &mut ChaCha8Rng| featurize_literals(&random_clause(rng), &cfg);
        let (conj, clause, p1, p2) = (v(&mut rng), v(&mut rng), v(&mut rng), v(&mut rng));
        let out = pair_vector(&conj, &clause, Some(&[p1.clone(), p2.clone()]), &cfg);
        prop_assert!(out.max_index().unwrap() < cfg.pair_dimension());
        let band = |lo: u32| SparseVector::from_pairs(out.band(lo, lo + b, 0).collect());
        prop_assert_eq!(band(0), clause.hashed_part(b));
        prop_assert_eq!(band(b), conj.hashed_part(b));
        if concat {
            prop_assert_eq!(band(2 * b), p1.hashed_part(b));
            prop_assert_eq!(band(3 * b), p2.hashed_part(b));
        } else {
            prop_assert_eq!(band(2 * b), p1.hashed_part(b).add(&p2.hashed_part(b)));
        }
        let counts: Vec<f64> = out.band(cfg.pair_count_offset(), cfg.pair_dimension(), 0).map(|e| e.1).collect();
        let want: Vec<f64> = clause.band(b, b + COUNT_SLOTS, 0).map(|e| e.1).collect();
        prop_assert_eq!(counts, want);
    }
}

#[test]
fn summed_pair_vectors_fit_three_bands_and_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = FeatureConfig::default().with_kinds(&[FeatureKind::Vertical, FeatureKind::Horizontal, FeatureKind::Count, FeatureKind::Conjecture, FeatureKind::Parent]);
    for _ in 0..1000 {
        let v = featurize_literals(&random_clause(&mut rng), &cfg);
        let out = pair_vector(&v, &v, Some(&[v.clone(), v.clone()]), &cfg);
        assert!(out.max_index().unwrap() < 3 * cfg.hash_base + COUNT_SLOTS);
    }
}

#[test]
fn fnv_reference_values() {
    assert_eq!(hash_feature("", 1 << 15), 14695981039346656037u64 % (1 << 15));
    assert_eq!(hash_feature("anything", 1), 0);
    // one FNV-1a step by hand: (offset ^ 'a') * prime
    let a = (14695981039346656037u64 ^ 0x61).wrapping_mul(1099511628211);
    assert_eq!(hash_feature("a", u64::MAX), a % u64::MAX);
}

/// Distinct feature strings of every fixture problem and of a synthetic library.
fn corpus_feature_strings() -> BTreeSet<String> {
    let cfg = FeatureConfig::default();
    let mut facts = Vec::new();
    for p in manifest().problem {
        facts.extend(fixture_facts(&p.file));
    }
    let lib = synthetic_library(&LibraryParams { facts: 2000, predicates: 200, constants: 60, depth: 3 }, 5);
    facts.extend(lib.corpus.facts().iter().cloned());
    let mut out = BTreeSet::new();
    for f in &facts {
        for c in clausify(std::slice::from_ref(f), &ClausifyOptions::default()) {
            let fs = clause_feature_strings(&c.literals, &cfg);
            out.extend(fs.vertical);
            out.extend(fs.horizontal);
        }
    }
    out
}

#[test]
fn hash_buckets_stay_balanced() {
    let strings = corpus_feature_strings();
    let base = 1u64 << 15;
    let mut load: HashMap<u64, usize> = HashMap::new();
    for s in &strings {
        *load.entry(hash_feature(s, base)).or_default() += 1;
    }
    let max = *load.values().max().unwrap() as f64;
    let mean = strings.len() as f64 / base as f64;
    assert!(strings.len() > 1000, "{}", strings.len());
    assert!(max <= 8.0 * mean.max(1.0), "max load {max}, mean {mean}");
}

#[test]
fn featurizing_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let c = random_clause(&mut rng);
        let a = featurize_literals(&c, &FeatureConfig::default());
        let b = featurize_literals(&c, &FeatureConfig::default());
        assert_eq!(a.entries(), b.entries());
    }
}

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use lgp_core::features::FeatureConfig;
use lgp_core::selectors::*;
use lgp_core::synth::{synthetic_library, LibraryParams, SynthLibrary};

fn library(seed: u64) -> SynthLibrary {
    let lib = synthetic_library(&LibraryParams { facts: 20, predicates: 6, constants: 3, depth: 3 }, seed);
    assert_eq!(lib.corpus.len(), 20);
    lib
}

fn assert_same(got: &Ranking, want: &[(String, f64)], what: &str) {
    let names: Vec<&str> = got.names().collect();
    let want_names: Vec<&str> = want.iter().map(|w| w.0.as_str()).collect();
    assert_eq!(names, want_names, "{what}");
    for ((_, a), (_, b)) in got.items().iter().zip(want) {
        assert!((a - b).abs() < 1e-12, "{what}: {a} vs {b}");
    }
}

#[test]
fn knn_matches_brute_force() {
    let cfg = FeatureConfig::default();
    let mut checked = 0;
    for seed in 0..10 {
        let lib = library(seed);
        if lib.deps.is_empty() {
            continue;
        }
        let corpus = Arc::new(lib.corpus.clone());
        let model = train_knn(corpus.clone(), &lib.deps, &cfg, KnnParams::default()).unwrap();
        for fact in corpus.facts() {
            for (k, ko) in [(K::Fixed(1), Some(1)), (K::Fixed(5), Some(5)), (K::Fixed(19), Some(19)), (K::Var, None)] {
                for n in [1, 3, 10, 20] {
                    let got = model.predict(fact, k, n, false).unwrap();
                    let want = knn_oracle(&corpus, &lib.deps, &cfg, fact, ko, n);
                    assert_same(&got, &want, &format!("seed {seed} fact {} k {k:?} n {n}", fact.name));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn nb_matches_brute_force() {
    let cfg = FeatureConfig::default();
    for seed in 0..10 {
        let lib = library(seed);
        if lib.deps.is_empty() {
            continue;
        }
        let corpus = Arc::new(lib.corpus.clone());
        for extended in [false, true] {
            let model = train_nb(corpus.clone(), &lib.deps, &cfg, extended, NbParams::default()).unwrap();
            for fact in corpus.facts() {
                for n in [1, 5, 20] {
                    let got = model.predict(fact, n, false).unwrap();
                    let want = nb_oracle(&corpus, &lib.deps, &cfg, extended, fact, n);
                    assert_same(&got, &want, &format!("seed {seed} fact {} extended {extended}", fact.name));
                }
            }
        }
    }
}

#[test]
fn idf_matches_document_frequency_recount() {
    let lib = library(3);
    let cfg = FeatureConfig::default();
    let model = train_knn(Arc::new(lib.corpus.clone()), &lib.deps, &cfg, KnnParams::default()).unwrap();
    let n = lib.corpus.len() as f64;
    let mut df: BTreeMap<u32, usize> = BTreeMap::new();
    for f in lib.corpus.facts() {
        for (i, _) in lgp_core::features::featurize_formula(&f.formula, &cfg).entries() {
            if *i < cfg.hash_base {
                *df.entry(*i).or_default() += 1;
            }
        }
    }
    for (i, d) in df {
        assert_eq!(model.idf(i), (n / d as f64).ln());
        assert!(model.idf(i) >= 0.0);
    }
}

#[test]
fn chronological_rankings_only_look_back() {
    let lib = synthetic_library(&LibraryParams { facts: 80, ..Default::default() }, 9);
    let corpus = Arc::new(lib.corpus.clone());
    let cfg = FeatureConfig::default();
    let knn = train_knn(corpus.clone(), &lib.deps, &cfg, KnnParams::default()).unwrap();
    let nb = train_nb(corpus.clone(), &lib.deps, &cfg, true, NbParams::default()).unwrap();
    for fact in corpus.facts() {
        for r in [knn.predict(fact, K::Var, 50, true).unwrap(), nb.predict(fact, 50, true).unwrap()] {
            assert!(r.len() <= 50);
            assert!(r.names().all(|n| corpus.serial(n).unwrap() < fact.serial), "{}", fact.name);
        }
    }
}

#[test]
fn nb_score_grows_with_co_use_counts() {
    let lib = library(4);
    let corpus = Arc::new(lib.corpus.clone());
    let model = train_nb(corpus.clone(), &lib.deps, &FeatureConfig::default(), true, NbParams::default()).unwrap();
    for conj in corpus.facts() {
        let c = model.conjecture_features(conj);
        for s in 0..corpus.len() {
            let base = model.score_with(model.counts(), s, &c);
            for f in c.iter().filter(|f| model.counts().ext[s].contains(f)) {
                let mut bumped = model.counts().clone();
                let t = bumped.co_uses[s].entry(*f).or_insert(0);
                if *t < bumped.uses[s] {
                    *t += 1;
                    assert!(model.score_with(&bumped, s, &c) >= base);
                }
            }
        }
    }
}

#[test]
fn ranking_files_round_trip() {
    let lib = synthetic_library(&LibraryParams { facts: 60, ..Default::default() }, 2);
    let corpus = Arc::new(lib.corpus.clone());
    let knn = train_knn(corpus.clone(), &lib.deps, &FeatureConfig::default(), KnnParams::default()).unwrap();
    let all: BTreeMap<String, Ranking> =
        corpus.facts().iter().map(|f| (f.name.clone(), knn.predict(f, K::Var, 10, false).unwrap())).collect();
    let back = parse_rankings(&write_rankings(&all, true)).unwrap();
    assert_eq!(back, all);
    let names_only = parse_rankings(&write_rankings(&all, false)).unwrap();
    for (k, r) in &all {
        assert!(names_only[k].names().eq(r.names()));
    }
}

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use lgp_core::binsel::*;
use lgp_core::features::{FeatureConfig, SparseVector};
use lgp_core::par::Exec;
use lgp_core::selectors::{train_knn, KnnParams};
use lgp_core::synth::{synthetic_library, LibraryParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Labels follow `x0 + x1 > x2 + 0.5` exactly.
fn rule_examples(n: usize, seed: u64) -> Vec<PairExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let vector = SparseVector::from_pairs(x.iter().enumerate().map(|(i, v)| (i as u32, *v)).collect());
            PairExample { vector, positive: x[0] + x[1] > x[2] + 0.5 }
        })
        .collect()
}

/// Fraction of (positive, negative) pairs scored in the right order; ties count half.
fn pair_auc(scores: &[(f64, bool)]) -> f64 {
    let (mut good, mut all) = (0.0, 0.0);
    for (p, _) in scores.iter().filter(|s| s.1) {
        for (n, _) in scores.iter().filter(|s| !s.1) {
            all += 1.0;
            good += if p > n { 1.0 } else if p == n { 0.5 } else { 0.0 };
        }
    }
    good / all
}

#[test]
fn noiseless_three_feature_rule_is_learned() {
    let train = rule_examples(200, 1);
    let test = rule_examples(400, 2);
    let (model, _) = train_gbdt(&train, &GbdtParams::default()).unwrap();
    let scores: Vec<(f64, bool)> = test.iter().map(|e| (model.predict(&e.vector), e.positive)).collect();
    let auc = pair_auc(&scores);
    assert!(auc >= 0.95, "held-out AUC {auc}");
}

#[test]
fn loss_never_increases_on_bundled_data() {
    let data = bundled_examples();
    for growth in [Growth::LeafWise, Growth::LevelWise] {
        for rate in [0.1, 0.3] {
            let params = GbdtParams { n_trees: 100, learning_rate: rate, growth, ..Default::default() };
            let (model, log) = train_gbdt(&data, &params).unwrap();
            assert_eq!(log.loss.len(), 101);
            for w in log.loss.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{growth:?} rate {rate}: {} -> {}", w[0], w[1]);
            }
            assert!((model.mean_loss(&data) - log.loss[100]).abs() < 1e-9);
        }
    }
}

#[test]
fn text_round_trip_predicts_identically() {
    let data = bundled_examples();
    let (model, _) = train_gbdt(&data, &GbdtParams { n_trees: 30, ..Default::default() }).unwrap();
    let back = GbdtModel::from_text(&model.to_text()).unwrap();
    assert_eq!(back, model);
    for e in &data {
        assert_eq!(back.predict(&e.vector).to_bits(), model.predict(&e.vector).to_bits());
    }
}

#[test]
fn parallel_split_search_builds_the_same_model() {
    let data = bundled_examples();
    let params = GbdtParams { n_trees: 15, ..Default::default() };
    let (a, la) = train_gbdt_with(&data, &params, Exec::Sequential).unwrap();
    let (b, lb) = train_gbdt_with(&data, &params, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(la, lb);
}

/// Walks every tree from its node list, independently of the model's own walk.
fn walk_oracle(model: &GbdtModel, x: &SparseVector) -> f64 {
    let mut margin = model.base_score;
    for t in &model.trees {
        let mut i = 0;
        margin += loop {
            match t.nodes[i] {
                Node::Leaf { weight } => break weight,
                Node::Split { feature, threshold, left, right } => {
                    let v = x.entries().iter().find(|e| e.0 == feature).map_or(0.0, |e| e.1);
                    i = if v < threshold { left } else { right } as usize;
                }
            }
        };
    }
    1.0 / (1.0 + (-margin).exp())
}

struct Setup {
    model: GbdtModel,
    knn: lgp_core::selectors::KnnModel,
    corpus: Arc<lgp_core::corpus::Corpus>,
}

fn premise_setup() -> Setup {
    let lib = synthetic_library(&LibraryParams { facts: 150, ..Default::default() }, 4);
    let corpus = Arc::new(lib.corpus.clone());
    let knn = train_knn(corpus.clone(), &lib.deps, &FeatureConfig::default(), KnnParams::default()).unwrap();
    let theorems: Vec<&str> = lib.deps.theorems().collect();
    let pairs = assemble_training_pairs(&corpus, &lib.deps, &knn, theorems.iter().copied(), PRESELECT);
    let (model, _) = train_gbdt(&pairs, &GbdtParams { n_trees: 20, ..Default::default() }).unwrap();
    Setup { model, knn, corpus }
}

#[test]
fn mined_sets_are_disjoint_and_fill_the_preselection() {
    let s = premise_setup();
    let deps = s.knn.deps().clone();
    for thm in deps.theorems() {
        let fact = s.corpus.get(thm).unwrap();
        let (pos, neg) = mined_sets(&deps, &s.knn, fact, PRESELECT).unwrap();
        assert!(pos.is_disjoint(&neg), "{thm}");
        let pre: BTreeSet<String> =
            s.knn.predict(fact, lgp_core::selectors::K::Var, PRESELECT, false).unwrap().names().map(String::from).collect();
        if pos.is_subset(&pre) {
            assert_eq!(neg.len(), pre.len() - pos.len());
        }
    }
}

#[test]
fn rerank_scores_match_tree_walk_and_thresholds_nest() {
    let s = premise_setup();
    let index = s.knn.index().clone();
    for fact in s.corpus.facts().iter().step_by(7) {
        let all = rerank(&s.model, &s.knn, fact, RerankMode::Threshold(0.0), PRESELECT, Exec::Sequential).unwrap();
        let pre = s.knn.predict(fact, lgp_core::selectors::K::Var, PRESELECT, false).unwrap();
        assert_eq!(all.len(), pre.len());
        let cv = index.vector_for(fact);
        for (name, score) in all.items() {
            let v = premise_pair(&cv, index.vector(index.serial(name).unwrap()), &index.cfg);
            assert!((walk_oracle(&s.model, &v) - score).abs() < 1e-12);
        }
        assert!(all.items().windows(2).all(|w| w[0].1 >= w[1].1));
        assert!(rerank(&s.model, &s.knn, fact, RerankMode::Threshold(1.0), PRESELECT, Exec::Sequential).unwrap().is_empty());
        let mut prev: Option<BTreeSet<String>> = None;
        for theta in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let kept: BTreeSet<String> =
                rerank(&s.model, &s.knn, fact, RerankMode::Threshold(theta), PRESELECT, Exec::Parallel).unwrap().names().map(String::from).collect();
            if let Some(p) = &prev {
                assert!(kept.is_subset(p), "theta {theta}");
            }
            prev = Some(kept);
        }
        let top = rerank(&s.model, &s.knn, fact, RerankMode::TopN(5), PRESELECT, Exec::Sequential).unwrap();
        assert_eq!(top, all.top(5));
    }
}

#[test]
fn equal_vectors_predict_equally_whatever_their_construction() {
    let data = bundled_examples();
    let (model, _) = train_gbdt(&data, &GbdtParams { n_trees: 10, ..Default::default() }).unwrap();
    for e in data.iter().take(50) {
        let mut pairs: Vec<(u32, f64)> = e.vector.entries().to_vec();
        pairs.reverse();
        let rebuilt = SparseVector::from_pairs(pairs);
        assert_eq!(model.predict(&rebuilt).to_bits(), model.predict(&e.vector).to_bits());
    }
}

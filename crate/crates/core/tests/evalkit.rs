mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use lgp_core::corpus::{DependencyDb, Provenance};
use lgp_core::evalkit::*;
use lgp_core::par::Exec;
use lgp_core::selectors::Ranking;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random ranking over part of a 10-fact universe and a random dependency set.
fn instance(rng: &mut ChaCha8Rng) -> (Ranking, BTreeSet<String>) {
    let mut facts: Vec<String> = (0..10).map(|i| format!("f{i}")).collect();
    facts.shuffle(rng);
    let ranked = rng.gen_range(0..=10);
    let ranking = Ranking::from_ordered(facts[..ranked].iter().enumerate().map(|(i, n)| (n.clone(), -(i as f64))).collect());
    let deps: BTreeSet<String> = facts.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    (ranking, deps)
}

#[test]
fn auc_equals_pair_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let (r, deps) = instance(&mut rng);
        assert!((auc(&r, &deps) - auc_oracle(&r, &deps)).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn cutoff_metrics_grow_with_n(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, deps) = instance(&mut rng);
        prop_assume!(!deps.is_empty());
        let mut prev = ranking_metrics(&r, &deps, 0, RECALL_CAP);
        for n in 1..=12 {
            let m = ranking_metrics(&r, &deps, n, RECALL_CAP);
            prop_assert!(m.cover >= prev.cover && m.prec >= prev.prec);
            prop_assert!((0.0..=100.0).contains(&m.cover) && (0.0..=100.0).contains(&m.auc));
            prop_assert!(m.full_recall_rank >= deps.len() as f64);
            prev = m;
        }
    }
}

#[test]
fn reference_examples() {
    let deps: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let r = Ranking::from_ordered(vec![("a".into(), 2.0), ("x".into(), 1.0)]);
    let m = ranking_metrics(&r, &deps, 2, RECALL_CAP);
    assert_eq!((m.cover, m.prec), (50.0, 1.0));
    let perfect = Ranking::from_ordered(vec![("a".into(), 3.0), ("b".into(), 2.0), ("x".into(), 1.0)]);
    let m = ranking_metrics(&perfect, &deps, 2, RECALL_CAP);
    assert_eq!((m.auc, m.full_recall_rank), (100.0, 2.0));
}

#[test]
fn compute_metrics_uses_the_smallest_proof() {
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let mut db = DependencyDb::new();
    db.insert("t", names(&["a", "b", "c"]), Provenance::Atp);
    db.insert("t", names(&["a"]), Provenance::Atp);
    let rankings = BTreeMap::from([("t".to_string(), Ranking::from_ordered(vec![("a".into(), 1.0), ("z".into(), 0.5)]))]);
    let m = compute_metrics(&rankings, &db, ["t"], 1, RECALL_CAP).unwrap();
    assert_eq!(m.cover, 100.0);
    assert!(compute_metrics(&rankings, &db, ["u"], 1, RECALL_CAP).is_err());
    let report = MetricsReport { n: 1, rows: vec![("knn/devel".into(), m)] };
    assert_eq!(MetricsReport::from_tsv(&report.to_tsv()).unwrap(), report);
}

#[test]
fn greedy_cover_is_near_optimal_on_fixture_matrices() {
    let matrices = fixture_matrices();
    assert!(matrices.len() >= 20);
    for (name, m) in matrices {
        assert!(m.slices.len() <= 12);
        for slots in 1..=4 {
            let cover = greedy_cover(&m, slots as f64, 1.0).unwrap();
            let got = solved_count(&m, &cover.schedule, &(0..m.problems.len()).collect::<Vec<_>>());
            let best = optimal_cover(&m, slots, 1.0);
            assert!(got as f64 >= (1.0 - (-1.0f64).exp()) * best as f64, "{name}: {got} vs optimum {best}");
            assert!(cover.gains.windows(2).all(|w| w[0] >= w[1]), "{name}");
            assert!(cover.schedule.total() <= slots as f64 + 1e-9);
            assert_eq!(got, cover.gains.iter().sum::<usize>());
        }
    }
}

#[test]
fn matrices_and_schedules_round_trip() {
    for (_, m) in fixture_matrices() {
        let back = EvalMatrix::from_tsv(&m.to_tsv()).unwrap();
        assert_eq!(back, m);
        for (a, b) in back.cells.iter().flatten().zip(m.cells.iter().flatten()) {
            assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
        }
        let s = greedy_cover(&m, 3.0, 1.0).unwrap().schedule;
        assert_eq!(Schedule::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn schedule_runs_recount_per_slice_solutions() {
    for (_, m) in fixture_matrices() {
        let problems = m.problems.clone();
        let s = greedy_cover(&m, 4.0, 1.0).unwrap().schedule;
        let run = run_schedule(&s, &problems, &m, Exec::Parallel).unwrap();
        let mut union = BTreeSet::new();
        for e in &s.entries {
            for p in &problems {
                if m.run(&e.slice, p, e.seconds).is_some() {
                    union.insert(p.clone());
                }
            }
        }
        assert_eq!(run.solved.keys().cloned().collect::<BTreeSet<_>>(), union);
        for (p, (slice, _)) in &run.solved {
            let first = s.entries.iter().position(|e| m.run(&e.slice, p, e.seconds).is_some()).unwrap();
            assert_eq!(&s.entries[first].slice, slice);
            assert_eq!(run.attempts[p], first + 1);
        }
        let empty = Schedule { entries: vec![], budget: 1.0 };
        assert!(run_schedule(&empty, &problems, &m, Exec::Sequential).unwrap().solved.is_empty());
        let bad = Schedule { entries: vec![ScheduleEntry { slice: "nope".into(), seconds: 1.0 }], budget: 1.0 };
        assert_eq!(run_schedule(&bad, &problems, &m, Exec::Sequential).unwrap_err(), EvalError::UnknownSlice("nope".into()));
    }
}

#[test]
fn robust_portfolio_is_seed_deterministic() {
    let sim = planted_trap_matrices(&TrapSimParams::default(), 3);
    let p = RobustParams { n_splits: 100, extra_splits: 20, seed: 9, ..Default::default() };
    let a = robust_portfolio(&sim.devel, 4.0, 1.0, &p, Exec::Parallel).unwrap();
    let b = robust_portfolio(&sim.devel, 4.0, 1.0, &p, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identical_slices_give_the_plain_cover() {
    let mut m = EvalMatrix::new(vec![], (0..8).map(|i| format!("p{i}")).collect());
    let row: Vec<Option<f64>> = (0..8).map(|i| (i % 2 == 0).then_some(0.5)).collect();
    for s in ["a", "b", "c"] {
        m.push_row(s, row.clone());
    }
    let out = robust_portfolio(&m, 2.0, 1.0, &RobustParams { n_splits: 30, extra_splits: 10, ..Default::default() }, Exec::Sequential).unwrap();
    assert_eq!(out.winner.schedule, greedy_cover(&m, 2.0, 1.0).unwrap().schedule);
    let small = m.restrict(&[0, 1, 2]);
    assert_eq!(robust_portfolio(&small, 2.0, 1.0, &RobustParams::default(), Exec::Sequential).unwrap_err(), EvalError::TooFewProblems(3));
}

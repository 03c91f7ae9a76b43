mod common;

use cliqster::baselines::{Cliqster, Method};
use cliqster::eval::*;
use cliqster::graph::Graph;
use cliqster::synth::{builtin_profile, generate};
use common::{complete, gnp};
use itertools::Itertools;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn brute_force_error(assignment: &[usize], labels: &[usize], k: usize) -> f64 {
    (0..k)
        .permutations(k)
        .map(|perm| {
            let hits = assignment.iter().zip(labels).filter(|(&a, &l)| perm[a] == l).count();
            1.0 - hits as f64 / labels.len() as f64
        })
        .fold(1.0, f64::min)
}

fn matrix_from(rows: &[(String, Vec<f64>)], dim: usize) -> FeatureMatrix {
    let mut fm = FeatureMatrix::new("test", dim);
    for (l, r) in rows {
        fm.push(l.clone(), r.clone()).unwrap();
    }
    fm
}

proptest! {
    #![proptest_config(common::config())]

    #[test]
    fn clustering_error_is_optimal_matching(
        pairs in proptest::collection::vec((0usize..4, 0usize..4), 1..60),
        relabel_seed in any::<u64>(),
    ) {
        let (assignment, labels): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let err = clustering_error(&assignment, &labels).unwrap();
        prop_assert!((err - brute_force_error(&assignment, &labels, 4)).abs() < 1e-12);
        prop_assert!((0.0..=0.75 + 1e-12).contains(&err));
        let perm = common::permutation(4, relabel_seed);
        let renamed: Vec<usize> = assignment.iter().map(|&a| perm[a]).collect();
        prop_assert!((clustering_error(&renamed, &labels).unwrap() - err).abs() < 1e-12);
    }

    #[test]
    fn knn_is_invariant_under_rotation(seed in any::<u64>()) {
        let mut rng = cliqster::seed::rng(seed);
        let dim = 4;
        let q = DMatrix::from_fn(dim, dim, |_, _| rng.random::<f64>() - 0.5).qr().q();
        let mut draw = |n: usize| -> Vec<(String, Vec<f64>)> {
            (0..n)
                .map(|i| {
                    let label = if i % 2 == 0 { "a" } else { "b" };
                    let shift = if i % 2 == 0 { 0.0 } else { 1.0 };
                    (label.to_string(), (0..dim).map(|_| shift + rng.random::<f64>()).collect())
                })
                .collect()
        };
        let (train, test) = (draw(30), draw(20));
        let rotate = |rows: &[(String, Vec<f64>)]| -> Vec<(String, Vec<f64>)> {
            rows.iter()
                .map(|(l, r)| (l.clone(), (&q * nalgebra::DVector::from_column_slice(r)).iter().copied().collect()))
                .collect()
        };
        let plain = knn_classify(&matrix_from(&train, dim), &matrix_from(&test, dim), 3).unwrap();
        let turned = knn_classify(&matrix_from(&rotate(&train), dim), &matrix_from(&rotate(&test), dim), 3).unwrap();
        prop_assert_eq!(plain, turned);
    }
}

#[test]
fn coin_flip_assignments_score_near_one_half() {
    let mut rng = cliqster::seed::rng(5);
    let labels: Vec<usize> = (0..1000).map(|i| i % 2).collect();
    let assignment: Vec<usize> = (0..1000).map(|_| rng.random_range(0..2)).collect();
    let err = clustering_error(&assignment, &labels).unwrap();
    assert!((0.4..=0.5).contains(&err), "{err}");
}

#[test]
fn curves_bracket_their_mean() {
    let g = gnp(300, 0.03, 2);
    let res = sample_protocol(&g, 60, 30, &Cliqster, 10, 4).unwrap();
    let c = &res.curves;
    for i in 0..10 {
        assert!(c.lower[i] <= c.mean[i] && c.mean[i] <= c.upper[i]);
    }
    let again = sample_protocol(&g, 60, 30, &Cliqster, 10, 4).unwrap();
    assert_eq!(res.features, again.features);
}

#[test]
fn complete_source_gives_single_clique_features() {
    let res = sample_protocol(&complete(40), 12, 6, &Cliqster, 5, 0).unwrap();
    assert!(res.features.iter().all(|f| f == &vec![1.0, 0.0, 0.0, 0.0, 0.0]));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = generate(&builtin_profile("CI").unwrap(), 3).unwrap();
    let h = generate(&builtin_profile("SI").unwrap(), 4).unwrap();
    let cats = vec![
        Category { label: "CI".into(), graph: g },
        Category { label: "SI".into(), graph: h },
    ];
    let params = DistinguishParams {
        repeats: 6,
        samples_per_category: 6,
        sample_size: 200,
        ..Default::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_distinguishability(&cats, &Method::ALL, &params).unwrap())
    };
    let (a, b) = (run(1), run(3));
    for (x, y) in a.methods.iter().zip(&b.methods) {
        assert_eq!(x.errors, y.errors);
        assert_eq!(x.curves, y.curves);
    }
}

#[test]
fn identical_sources_cluster_at_chance() {
    let g = gnp(400, 0.02, 8);
    let cats = vec![
        Category { label: "x".into(), graph: g.clone() },
        Category { label: "y".into(), graph: g },
    ];
    let params = DistinguishParams {
        repeats: 20,
        samples_per_category: 20,
        sample_size: 100,
        ..Default::default()
    };
    let report = run_distinguishability(&cats, &Method::ALL, &params).unwrap();
    for m in &report.methods {
        assert!(m.mean_error > 0.3, "{}: {}", m.method, m.mean_error);
    }
}

#[test]
fn run_classification_reports_each_training_size() {
    let a = gnp(200, 0.01, 1);
    let b = Graph::from_edges(200, (0..66).map(|i| (3 * i, 3 * i + 1))).unwrap();
    let pair = vec![
        Category { label: "a".into(), graph: a },
        Category { label: "b".into(), graph: b },
    ];
    let params = ClassificationParams {
        train_sizes: vec![10, 20],
        test_size: 20,
        repeats: 3,
        sample_size: 100,
        ..Default::default()
    };
    let curve = run_classification(&pair, Method::Svd, &params).unwrap();
    assert_eq!(curve.iter().map(|p| p.train_size).collect::<Vec<_>>(), vec![10, 20]);
    for p in &curve {
        assert_eq!(p.accuracies.len(), 3);
        assert!((0.0..=1.0).contains(&p.mean));
    }
}

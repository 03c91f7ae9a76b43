#![allow(dead_code)]

use cliqster::graph::Graph;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Default cases without the on-disk regression file, which needs a crate root
/// next to the test sources.
pub fn config() -> ProptestConfig {
    ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// G(n, p) drawn from a seeded stream.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = cliqster::seed::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// Random permutation of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut cliqster::seed::rng(seed));
    p
}

pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Exact Zipf(alpha) draws on {1, 2, ...} by Devroye's rejection method.
pub fn zipf_samples(alpha: f64, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = cliqster::seed::rng(seed);
    let b = 2f64.powf(alpha - 1.0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        let x = u.powf(-1.0 / (alpha - 1.0)).floor();
        if !x.is_finite() || x > 1e15 {
            continue;
        }
        let t = (1.0 + 1.0 / x).powf(alpha - 1.0);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            out.push(x as u64);
        }
    }
    out
}

/// Graphs with up to `max_n` vertices and any edge set.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges = pairs.iter().zip(&mask).filter(|(_, &keep)| keep).map(|(&e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

//! Experimental protocol: repeated induced-subgraph sampling, k-means
//! distinguishability and k-NN classification of feature vectors.
//!
//! Every repeat derives its own seed from the master seed and its index, and
//! results are collected by index, so outputs do not depend on the number of
//! worker threads.

use std::time::Instant;

use pathfinding::prelude::{kuhn_munkres, Matrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::baselines::{Decomposer, Method};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

/// Labeled feature vectors of a common length, produced by one method.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub method: String,
    pub top_k: usize,
    labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn new(method: impl Into<String>, top_k: usize) -> Self {
        FeatureMatrix {
            method: method.into(),
            top_k,
            labels: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, features: Vec<f64>) -> Result<()> {
        if features.len() != self.top_k {
            return Err(Error::LengthMismatch {
                left: features.len(),
                right: self.top_k,
            });
        }
        self.labels.push(label.into());
        self.rows.push(features);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Distinct labels in first-appearance order.
    pub fn label_set(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for l in &self.labels {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        out
    }

    /// Row labels as indices into `label_set()`.
    pub fn label_indices(&self) -> Vec<usize> {
        let set = self.label_set();
        self.labels
            .iter()
            .map(|l| set.iter().position(|s| s == l).unwrap())
            .collect()
    }

    /// Scales every row to unit Euclidean norm; zero rows stay zero.
    pub fn normalized(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    r.iter().map(|x| x / norm).collect()
                } else {
                    r.clone()
                }
            })
            .collect();
        FeatureMatrix {
            rows,
            ..self.clone()
        }
    }
}

/// Per-position mean and `mean ± 2σ` band of a set of feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientCurves {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl CoefficientCurves {
    /// Uses the population standard deviation, so a single vector has `σ = 0`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let len = rows.first().map_or(0, Vec::len);
        let count = rows.len().max(1) as f64;
        let mut mean = vec![0.0; len];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r) {
                *m += x / count;
            }
        }
        let mut std = vec![0.0; len];
        for r in rows {
            for ((s, x), m) in std.iter_mut().zip(r).zip(&mean) {
                *s += (x - m) * (x - m) / count;
            }
        }
        for s in &mut std {
            *s = s.sqrt();
        }
        let lower = mean.iter().zip(&std).map(|(m, s)| m - 2.0 * s).collect();
        let upper = mean.iter().zip(&std).map(|(m, s)| m + 2.0 * s).collect();
        CoefficientCurves {
            mean,
            std,
            lower,
            upper,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub features: Vec<Vec<f64>>,
    pub curves: CoefficientCurves,
}

/// Decomposes `repeats` random induced subgraphs of `g` and summarizes their
/// top-k features.
pub fn sample_protocol(
    g: &Graph,
    sample_size: usize,
    repeats: usize,
    method: &dyn Decomposer,
    top_k: usize,
    rng_seed: u64,
) -> Result<ProtocolResult> {
    let features = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let sample = g.sample_induced(sample_size, seed::derive(rng_seed, r as u64))?;
            method.features(&sample, top_k)
        })
        .collect::<Result<Vec<_>>>()?;
    let curves = CoefficientCurves::from_rows(&features);
    Ok(ProtocolResult { features, curves })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances.
    pub sse: f64,
}

const LLOYD_MAX_ITERATIONS: usize = 300;

/// Lloyd's algorithm with k-means++ seeding; keeps the restart with the
/// lowest within-cluster sum of squares.
pub fn kmeans_cluster(points: &[Vec<f64>], k: usize, restarts: usize, rng_seed: u64) -> Result<Clustering> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let distinct = count_distinct(points);
    if distinct < k {
        return Err(Error::TooFewDistinctPoints { points: distinct, k });
    }
    let mut best: Option<Clustering> = None;
    for restart in 0..restarts.max(1) {
        let mut rng = seed::rng(seed::derive(rng_seed, restart as u64));
        let run = lloyd(points, plus_plus_init(points, k, &mut rng));
        if best.as_ref().is_none_or(|b| run.sse < b.sse) {
            best = Some(run);
        }
    }
    Ok(best.unwrap())
}

fn count_distinct(points: &[Vec<f64>]) -> usize {
    let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
    let cmp = |a: &&Vec<f64>, b: &&Vec<f64>| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(a.len().cmp(&b.len()))
    };
    sorted.sort_by(cmp);
    sorted.dedup_by(|a, b| cmp(&&**a, &&**b).is_eq());
    sorted.len()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut nearest: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let mut target = rng.random::<f64>() * total;
        let mut pick = nearest.iter().rposition(|&d| d > 0.0).unwrap();
        for (i, &d) in nearest.iter().enumerate() {
            if d > 0.0 && target < d {
                pick = i;
                break;
            }
            target -= d;
        }
        let c = points[pick].clone();
        for (n, p) in nearest.iter_mut().zip(points) {
            *n = n.min(squared_distance(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> Clustering {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignment = vec![usize::MAX; points.len()];
    for _ in 0..LLOYD_MAX_ITERATIONS {
        let mut changed = false;
        for (a, p) in assignment.iter_mut().zip(points) {
            let (j, _) = nearest_centroid(p, &centroids);
            if *a != j {
                *a = j;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (&a, p) in assignment.iter().zip(points) {
            counts[a] += 1;
            for (s, x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            } else {
                // re-seed an empty cluster at the point worst served by its centroid
                let far = (0..points.len())
                    .max_by(|&a, &b| {
                        let da = squared_distance(&points[a], &centroids[assignment[a]]);
                        let db = squared_distance(&points[b], &centroids[assignment[b]]);
                        da.total_cmp(&db).then(b.cmp(&a))
                    })
                    .unwrap();
                centroids[j] = points[far].clone();
            }
        }
    }
    let sse = points
        .iter()
        .zip(&assignment)
        .map(|(p, &a)| squared_distance(p, &centroids[a]))
        .sum();
    Clustering {
        assignment,
        centroids,
        sse,
    }
}

/// Fraction of points misassigned under the best one-to-one matching of
/// clusters to labels.
pub fn clustering_error(assignment: &[usize], labels: &[usize]) -> Result<f64> {
    if assignment.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: labels.len(),
        });
    }
    if assignment.is_empty() {
        return Ok(0.0);
    }
    let size = assignment
        .iter()
        .chain(labels)
        .max()
        .map_or(0, |&m| m + 1);
    let mut confusion = Matrix::new(size, size, 0i64);
    for (&a, &l) in assignment.iter().zip(labels) {
        confusion[(a, l)] += 1;
    }
    let (matched, _) = kuhn_munkres(&confusion);
    Ok(1.0 - matched as f64 / assignment.len() as f64)
}

/// Accuracy of `k`-nearest-neighbor majority voting under Euclidean
/// distance. Distance ties favor the earlier training row; vote ties favor
/// the label whose best-ranked neighbor is nearest.
pub fn knn_classify(train: &FeatureMatrix, test: &FeatureMatrix, k: usize) -> Result<f64> {
    if train.is_empty() {
        return Err(Error::InvalidParameter("training set is empty".into()));
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must lie in 1..={}",
            train.len()
        )));
    }
    if test.is_empty() {
        return Err(Error::InvalidParameter("test set is empty".into()));
    }
    if train.top_k != test.top_k {
        return Err(Error::LengthMismatch {
            left: train.top_k,
            right: test.top_k,
        });
    }
    let mut correct = 0usize;
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(train.len());
    for (row, truth) in test.rows.iter().zip(&test.labels) {
        order.clear();
        order.extend(
            train
                .rows
                .iter()
                .enumerate()
                .map(|(i, t)| (squared_distance(row, t), i)),
        );
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes: Vec<(&str, usize, usize)> = Vec::new(); // (label, count, first rank)
        for (rank, &(_, i)) in order[..k].iter().enumerate() {
            let label = train.labels[i].as_str();
            match votes.iter_mut().find(|v| v.0 == label) {
                Some(v) => v.1 += 1,
                None => votes.push((label, 1, rank)),
            }
        }
        let winner = votes
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
            .unwrap()
            .0;
        if winner == truth {
            correct += 1;
        }
    }
    Ok(correct as f64 / test.len() as f64)
}

/// A labeled source network.
#[derive(Debug, Clone)]
pub struct Category {
    pub label: String,
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishParams {
    pub repeats: usize,
    pub samples_per_category: usize,
    pub sample_size: usize,
    pub top_k: usize,
    pub restarts: usize,
    pub normalize: bool,
    pub seed: u64,
}

impl Default for DistinguishParams {
    fn default() -> Self {
        DistinguishParams {
            repeats: 100,
            samples_per_category: 20,
            sample_size: 1000,
            top_k: 20,
            restarts: 8,
            normalize: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: String,
    /// Clustering error of each repeat, by repeat index.
    pub errors: Vec<f64>,
    pub mean_error: f64,
    pub std_error: f64,
    /// Wall time spent computing features, summed over repeats.
    pub decompose_seconds: f64,
    /// Feature curves of each category, in category order.
    pub curves: Vec<(String, CoefficientCurves)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub categories: Vec<String>,
    pub methods: Vec<MethodSummary>,
}

/// Sample standard deviation (zero for fewer than two values).
fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn draw_samples(categories: &[Category], per_category: usize, sample_size: usize, stream: u64) -> Result<Vec<Vec<Graph>>> {
    categories
        .iter()
        .enumerate()
        .map(|(c, cat)| {
            let cat_stream = seed::derive(stream, c as u64);
            (0..per_category)
                .map(|i| cat.graph.sample_induced(sample_size, seed::derive(cat_stream, i as u64)))
                .collect()
        })
        .collect()
}

struct RepeatOutcome {
    errors: Vec<f64>,
    seconds: Vec<f64>,
    features: Vec<FeatureMatrix>,
}

/// Clusters pooled samples of all categories with `k` = category count and
/// scores each method's clustering error, repeat by repeat. Every method sees
/// the same samples within a repeat.
pub fn run_distinguishability(categories: &[Category], methods: &[Method], params: &DistinguishParams) -> Result<ExperimentReport> {
    if categories.is_empty() {
        return Err(Error::InvalidParameter("no categories given".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidParameter("no methods given".into()));
    }
    let decomposers: Vec<Box<dyn Decomposer>> = methods.iter().map(|m| m.decomposer()).collect();
    let outcomes = (0..params.repeats)
        .into_par_iter()
        .map(|r| -> Result<RepeatOutcome> {
            let stream = seed::derive(params.seed, r as u64);
            let samples = draw_samples(categories, params.samples_per_category, params.sample_size, stream)?;
            let mut outcome = RepeatOutcome {
                errors: Vec::new(),
                seconds: Vec::new(),
                features: Vec::new(),
            };
            for (mi, dec) in decomposers.iter().enumerate() {
                let start = Instant::now();
                let mut fm = FeatureMatrix::new(dec.name(), params.top_k);
                for (cat, graphs) in categories.iter().zip(&samples) {
                    for g in graphs {
                        fm.push(cat.label.clone(), dec.features(g, params.top_k)?)?;
                    }
                }
                outcome.seconds.push(start.elapsed().as_secs_f64());
                let input = if params.normalize { fm.normalized() } else { fm.clone() };
                let assignment = match kmeans_cluster(
                    input.rows(),
                    categories.len(),
                    params.restarts,
                    seed::derive(stream, 1 << 32 | mi as u64),
                ) {
                    Ok(clustering) => clustering.assignment,
                    // the method maps too many samples to the same vector;
                    // score the single-cluster assignment it effectively makes
                    Err(Error::TooFewDistinctPoints { .. }) => vec![0; input.len()],
                    Err(e) => return Err(e),
                };
                outcome
                    .errors
                    .push(clustering_error(&assignment, &input.label_indices())?);
                outcome.features.push(fm);
            }
            Ok(outcome)
        })
        .collect::<Result<Vec<_>>>()?;

    let summaries = decomposers
        .iter()
        .enumerate()
        .map(|(mi, dec)| {
            let errors: Vec<f64> = outcomes.iter().map(|o| o.errors[mi]).collect();
            let (mean_error, std_error) = mean_std(&errors);
            let curves = categories
                .iter()
                .map(|cat| {
                    let rows: Vec<Vec<f64>> = outcomes
                        .iter()
                        .flat_map(|o| {
                            let fm = &o.features[mi];
                            fm.labels()
                                .iter()
                                .zip(fm.rows())
                                .filter(|(l, _)| **l == cat.label)
                                .map(|(_, r)| r.clone())
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    (cat.label.clone(), CoefficientCurves::from_rows(&rows))
                })
                .collect();
            MethodSummary {
                method: dec.name().to_string(),
                mean_error,
                std_error,
                errors,
                decompose_seconds: outcomes.iter().map(|o| o.seconds[mi]).sum(),
                curves,
            }
        })
        .collect();
    Ok(ExperimentReport {
        categories: categories.iter().map(|c| c.label.clone()).collect(),
        methods: summaries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationParams {
    /// Total training rows per evaluation, split evenly over the two categories.
    pub train_sizes: Vec<usize>,
    /// Total test rows, split evenly over the two categories.
    pub test_size: usize,
    pub knn_k: usize,
    pub repeats: usize,
    /// Samples drawn per category and repeat; train and test rows are
    /// disjoint subsets of this pool. `None` sizes the pool to fit the
    /// largest training size plus the test set.
    pub pool_per_category: Option<usize>,
    pub sample_size: usize,
    pub top_k: usize,
    pub normalize: bool,
    pub seed: u64,
}

impl Default for ClassificationParams {
    fn default() -> Self {
        ClassificationParams {
            train_sizes: vec![10, 20, 40, 60, 80, 100],
            test_size: 100,
            knn_k: 3,
            repeats: 20,
            pool_per_category: None,
            sample_size: 1000,
            top_k: 20,
            normalize: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyPoint {
    pub train_size: usize,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

/// Splits a total over two categories, giving the first any odd remainder.
fn split_two(total: usize) -> [usize; 2] {
    [total - total / 2, total / 2]
}

/// k-NN accuracy as a function of training-set size for a pair of categories.
pub fn run_classification(pair: &[Category], method: Method, params: &ClassificationParams) -> Result<Vec<AccuracyPoint>> {
    if pair.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "classification needs exactly two categories, got {}",
            pair.len()
        )));
    }
    if params.test_size == 0 {
        return Err(Error::InvalidParameter("test size must be positive".into()));
    }
    let test_split = split_two(params.test_size);
    let largest = params.train_sizes.iter().copied().max().unwrap_or(0);
    let needed = split_two(largest)[0] + test_split[0];
    let pool = params.pool_per_category.unwrap_or(needed);
    for &t in &params.train_sizes {
        let train_split = split_two(t);
        for c in 0..2 {
            if train_split[c] + test_split[c] > pool {
                return Err(Error::InvalidParameter(format!(
                    "training size {t} leaves no disjoint test set in a pool of {pool} samples per category"
                )));
            }
        }
    }
    let decomposer = method.decomposer();

    let per_repeat = (0..params.repeats)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let stream = seed::derive(params.seed, r as u64);
            let samples = draw_samples(pair, pool, params.sample_size, stream)?;
            let features = samples
                .iter()
                .map(|graphs| {
                    graphs
                        .iter()
                        .map(|g| decomposer.features(g, params.top_k))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut rng = seed::rng(seed::derive(stream, 1 << 33));
            params
                .train_sizes
                .iter()
                .map(|&t| {
                    let train_split = split_two(t);
                    let mut train_rows = Vec::new();
                    let mut test = FeatureMatrix::new(decomposer.name(), params.top_k);
                    for (c, cat) in pair.iter().enumerate() {
                        let mut idx: Vec<usize> = (0..pool).collect();
                        idx.shuffle(&mut rng);
                        for &i in &idx[..train_split[c]] {
                            train_rows.push((cat.label.clone(), features[c][i].clone()));
                        }
                        for &i in &idx[train_split[c]..train_split[c] + test_split[c]] {
                            test.push(cat.label.clone(), features[c][i].clone())?;
                        }
                    }
                    // distance ties go to the earlier training row, so the
                    // row order must not follow the category order
                    train_rows.shuffle(&mut rng);
                    let mut train = FeatureMatrix::new(decomposer.name(), params.top_k);
                    for (label, row) in train_rows {
                        train.push(label, row)?;
                    }
                    if params.normalize {
                        train = train.normalized();
                        test = test.normalized();
                    }
                    knn_classify(&train, &test, params.knn_k)
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(params
        .train_sizes
        .iter()
        .enumerate()
        .map(|(ti, &train_size)| {
            let accuracies: Vec<f64> = per_repeat.iter().map(|acc| acc[ti]).collect();
            let (mean, std) = mean_std(&accuracies);
            AccuracyPoint {
                train_size,
                accuracies,
                mean,
                std,
            }
        })
        .collect())
}

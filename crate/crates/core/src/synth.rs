//! Synthetic category networks.
//!
//! A Chung–Lu background graph with power-law expected degrees, plus planted
//! cliques on uniformly chosen vertex subsets. Each builtin profile carries
//! the exponent and density of one category, and a planted-clique size range
//! that no other builtin profile shares.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::seed;

/// Density multiplier builtin profiles apply for desk-scale sampling.
pub const DEFAULT_SAMPLE_SCALE: f64 = 20.0;

/// Planted cliques per 1000 vertices, sizes uniform in `min_size..=max_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueBoost {
    pub per_thousand: f64,
    pub min_size: usize,
    pub max_size: usize,
}

impl CliqueBoost {
    pub fn none() -> Self {
        CliqueBoost {
            per_thousand: 0.0,
            min_size: 3,
            max_size: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryProfile {
    pub name: String,
    pub alpha: f64,
    /// Target edge density before `sample_scale` is applied.
    pub density: f64,
    pub clique_boost: CliqueBoost,
    pub n: usize,
    pub sample_scale: f64,
}

impl CategoryProfile {
    /// Density the background graph is generated at.
    pub fn effective_density(&self) -> f64 {
        self.density * self.sample_scale
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::InvalidProfile {
                name: self.name.clone(),
                reason,
            })
        };
        if !(self.alpha > 1.0) {
            return bad(format!("alpha must exceed 1, got {}", self.alpha));
        }
        if !(self.density > 0.0 && self.density < 1.0) {
            return bad(format!("density must lie in (0, 1), got {}", self.density));
        }
        if !(self.sample_scale > 0.0) {
            return bad(format!("sample scale must be positive, got {}", self.sample_scale));
        }
        if self.n < 2 {
            return bad(format!("need at least 2 vertices, got {}", self.n));
        }
        let b = &self.clique_boost;
        if !(b.per_thousand >= 0.0) {
            return bad("planted clique rate must be non-negative".into());
        }
        if b.min_size < 3 || b.min_size > b.max_size || b.max_size > self.n {
            return bad(format!(
                "planted clique sizes {}..={} must satisfy 3 <= min <= max <= n",
                b.min_size, b.max_size
            ));
        }
        Ok(())
    }

    /// Planted clique count for this profile's vertex count.
    pub fn planted_count(&self) -> usize {
        (self.clique_boost.per_thousand * self.n as f64 / 1000.0).round() as usize
    }
}

pub fn builtin_profiles() -> Vec<CategoryProfile> {
    // (name, alpha, density, n, planted per 1000 vertices, size range);
    // sparser categories receive larger planted cliques
    let rows: [(&str, f64, f64, usize, f64, usize, usize); 5] = [
        ("SI", 1.838563, 0.0000180, 3000, 1.0, 24, 27),
        ("CI", 1.733839, 0.0000427, 2000, 0.5, 8, 10),
        ("PEPS", 3.107326, 0.0001533, 2000, 4.0, 6, 7),
        ("ST", 1.770715, 0.0002068, 2000, 4.0, 4, 5),
        ("LL", 2.977307, 0.0006220, 2000, 4.0, 3, 3),
    ];
    rows.iter()
        .map(|&(name, alpha, density, n, per_thousand, min_size, max_size)| CategoryProfile {
            name: name.to_string(),
            alpha,
            density,
            clique_boost: CliqueBoost {
                per_thousand,
                min_size,
                max_size,
            },
            n,
            sample_scale: DEFAULT_SAMPLE_SCALE,
        })
        .collect()
}

/// Builtin profile by case-insensitive name.
pub fn builtin_profile(name: &str) -> Result<CategoryProfile> {
    builtin_profiles()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownProfile(name.to_string()))
}

pub fn generate(profile: &CategoryProfile, rng_seed: u64) -> Result<Graph> {
    profile.validate()?;
    let n = profile.n;
    let density = profile.effective_density();
    if density >= 1.0 {
        return Err(Error::InvalidProfile {
            name: profile.name.clone(),
            reason: format!(
                "scaled density {density} asks for expected degree above n - 1 = {}",
                n - 1
            ),
        });
    }
    let mut rng = seed::rng(rng_seed);
    let boost = &profile.clique_boost;
    let sizes: Vec<usize> = (0..profile.planted_count())
        .map(|_| rng.random_range(boost.min_size..=boost.max_size))
        .collect();
    // planted pairs are paid for out of the density budget, so the whole
    // graph rather than the background alone tracks the target density
    let budget = density * (n * (n - 1) / 2) as f64;
    let planted: usize = sizes.iter().map(|s| s * (s - 1) / 2).sum();
    if planted as f64 >= budget {
        return Err(Error::InvalidProfile {
            name: profile.name.clone(),
            reason: format!(
                "planted cliques need {planted} vertex pairs but the density budget is {budget:.1}"
            ),
        });
    }
    let weights = expected_degrees(n, profile.alpha, 2.0 * (budget - planted as f64), &mut rng);
    let mut edges = chung_lu(&weights, &mut rng);
    for &size in &sizes {
        let members = sample(&mut rng, n, size).into_vec();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, edges)
}

/// Pareto(`alpha`) weights rescaled to sum to `target`, each capped at the
/// structural cutoff `√target` so that no pair probability saturates.
fn expected_degrees(n: usize, alpha: f64, target: f64, rng: &mut impl Rng) -> Vec<f64> {
    let cap = target.sqrt();
    let exponent = -1.0 / (alpha - 1.0);
    let mut w: Vec<f64> = (0..n)
        .map(|_| (1.0 - rng.random::<f64>()).powf(exponent))
        .collect();
    // capping removes mass, so rescale until the capped sum settles on target
    for _ in 0..100 {
        let sum: f64 = w.iter().sum();
        if (sum - target).abs() <= 1e-12 * target {
            break;
        }
        let scale = target / sum;
        for x in &mut w {
            *x = (*x * scale).min(cap);
        }
    }
    w
}

/// Independent edges with probability `min(1, wᵤ·wᵥ / Σw)`, generated in
/// expected `O(n + m)` time by skipping over non-edges in weight order.
fn chung_lu(weights: &[f64], rng: &mut impl Rng) -> Vec<(Vertex, Vertex)> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let w: Vec<f64> = order.iter().map(|&v| weights[v]).collect();
    let prob = |i: usize, j: usize| (w[i] * w[j] / total).min(1.0);

    let mut edges = Vec::new();
    if total <= 0.0 {
        return edges;
    }
    for u in 0..n.saturating_sub(1) {
        let mut v = u + 1;
        let mut p = prob(u, v);
        while v < n && p > 0.0 {
            if p < 1.0 {
                // geometric skip: pairs before the next candidate are rejected
                let r: f64 = 1.0 - rng.random::<f64>();
                v += (r.ln() / (-p).ln_1p()).floor() as usize;
            }
            if v < n {
                let q = prob(u, v);
                if rng.random::<f64>() < q / p {
                    let (a, b) = (order[u], order[v]);
                    edges.push((a.min(b), a.max(b)));
                }
                p = q;
                v += 1;
            }
        }
    }
    edges
}

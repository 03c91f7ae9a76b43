//! Degree-distribution diagnostics.
//!
//! `fit_power_law` fits a discrete power law `P(X = x) = x^(−α) / ζ(α, x_min)`
//! for `x ≥ x_min` by maximizing the exact discrete likelihood; the
//! closed-form estimate `α₀ = 1 + n / Σ ln(xᵢ / (x_min − ½))` is reported
//! alongside. When `x_min` is not given it is chosen by
//! minimizing the Kolmogorov–Smirnov distance between the empirical tail and
//! the fitted model.

use crate::cliques::enumerate_maximal_cliques;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Smallest tail the automatic `x_min` search will fit.
pub const MIN_TAIL: usize = 10;

/// Automatic `x_min` candidates stop at this quantile of the data.
pub const X_MIN_QUANTILE: f64 = 0.9;

const ALPHA_UPPER: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    /// Maximum-likelihood exponent.
    pub alpha: f64,
    /// Closed-form estimate with the `x_min − ½` offset.
    pub alpha_approx: f64,
    pub x_min: u64,
    pub n_tail: usize,
    /// KS distance between the empirical tail and the fitted law.
    pub ks: f64,
}

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (k + q)^(−s)` for `s > 1`, `q > 0`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    // B₂ⱼ / (2j)!
    const B2J_OVER_FACT: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    const N: usize = 10;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + N as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising = s (s+1) … (s+2j−2), power = a^(−s−2j+1)
    let mut rising = s;
    let mut power = a.powf(-s - 1.0);
    for (j, c) in B2J_OVER_FACT.iter().enumerate() {
        let term = c * rising * power;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let next = 2.0 * (j as f64 + 1.0);
        rising *= (s + next - 1.0) * (s + next);
        power /= a * a;
    }
    sum
}

pub fn fit_power_law(degrees: &[u64], x_min: Option<u64>) -> Result<PowerLawFit> {
    if degrees.contains(&0) {
        return Err(Error::PowerLaw("degrees must be at least 1".into()));
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    if let Some(x_min) = x_min {
        if x_min == 0 {
            return Err(Error::PowerLaw("x_min must be at least 1".into()));
        }
        let start = sorted.partition_point(|&d| d < x_min);
        return fit_tail(&sorted[start..], x_min);
    }

    let cap = quantile(&sorted, X_MIN_QUANTILE);
    let mut best: Option<PowerLawFit> = None;
    let mut start = 0;
    while start < sorted.len() {
        let candidate = sorted[start];
        if candidate > cap || sorted.len() - start < MIN_TAIL {
            break;
        }
        if let Ok(fit) = fit_tail(&sorted[start..], candidate) {
            if best.as_ref().is_none_or(|b| fit.ks < b.ks) {
                best = Some(fit);
            }
        }
        start = sorted.partition_point(|&d| d <= candidate);
    }
    match best {
        Some(fit) => Ok(fit),
        None => match sorted.first() {
            Some(&lowest) => fit_tail(&sorted, lowest),
            None => Err(Error::PowerLaw("empty tail".into())),
        },
    }
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Fits the sorted tail (all values `≥ x_min`).
fn fit_tail(tail: &[u64], x_min: u64) -> Result<PowerLawFit> {
    let n = tail.len();
    if n == 0 {
        return Err(Error::PowerLaw("empty tail".into()));
    }
    if n < 2 {
        return Err(Error::PowerLaw(format!(
            "need at least 2 samples at or above x_min = {x_min}"
        )));
    }
    if tail[0] == tail[n - 1] {
        return Err(Error::PowerLaw(
            "all tail values are equal; the exponent is undefined".into(),
        ));
    }
    let log_sum: f64 = tail.iter().map(|&x| (x as f64).ln()).sum();
    let shifted = x_min as f64 - 0.5;
    let alpha_approx =
        1.0 + n as f64 / tail.iter().map(|&x| (x as f64 / shifted).ln()).sum::<f64>();

    let q = x_min as f64;
    let neg_log_likelihood = |alpha: f64| alpha * log_sum + n as f64 * hurwitz_zeta(alpha, q).ln();
    let alpha = minimize_convex(neg_log_likelihood, 1.0 + 1e-9, ALPHA_UPPER);
    let ks = ks_distance(tail, x_min, alpha);
    Ok(PowerLawFit {
        alpha,
        alpha_approx,
        x_min,
        n_tail: n,
        ks,
    })
}

/// Golden-section search for the minimum of a convex function on `[lo, hi]`.
fn minimize_convex(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `sup_x |F_emp(x) − F(x)|` over the integers `x ≥ x_min`, where both CDFs
/// are step functions that only change at integers.
fn ks_distance(tail: &[u64], x_min: u64, alpha: f64) -> f64 {
    let n = tail.len() as f64;
    let norm = hurwitz_zeta(alpha, x_min as f64);
    let model_cdf = |x: u64| 1.0 - hurwitz_zeta(alpha, (x + 1) as f64) / norm;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    let mut below = 0.0; // F_emp just below the current value
    while i < tail.len() {
        let v = tail[i];
        let mut j = i;
        while j < tail.len() && tail[j] == v {
            j += 1;
        }
        let emp = j as f64 / n;
        if v > x_min {
            // highest integer before v still sees the previous empirical level
            worst = worst.max((below - model_cdf(v - 1)).abs());
        }
        worst = worst.max((emp - model_cdf(v)).abs());
        below = emp;
        i = j;
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub components: usize,
    /// `None` for graphs with fewer than two vertices.
    pub density: Option<f64>,
    pub max_degree: usize,
    pub degeneracy: usize,
    pub maximal_cliques: usize,
}

pub fn summary(g: &Graph) -> GraphSummary {
    GraphSummary {
        n: g.n(),
        m: g.m(),
        components: g.connected_components().len(),
        density: g.density().ok(),
        max_degree: g.max_degree(),
        degeneracy: g.degeneracy_ordering().degeneracy,
        maximal_cliques: enumerate_maximal_cliques(g).len(),
    }
}

/// Positive vertex degrees, the input `fit_power_law` expects.
pub fn positive_degrees(g: &Graph) -> Vec<u64> {
    g.degrees()
        .into_iter()
        .filter(|&d| d > 0)
        .map(|d| d as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_closed_forms() {
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0) - PI.powi(4) / 90.0).abs() < 1e-13);
        // ζ(2, 1/2) = π²/2
        assert!((hurwitz_zeta(2.0, 0.5) - PI * PI / 2.0).abs() < 1e-12);
        // shift identity ζ(s, q) = q^(−s) + ζ(s, q + 1)
        for &(s, q) in &[(1.3, 1.0), (2.7, 3.0), (7.5, 12.0)] {
            let lhs = hurwitz_zeta(s, q);
            let rhs = q.powf(-s) + hurwitz_zeta(s, q + 1.0);
            assert!((lhs - rhs).abs() < 1e-12 * lhs);
        }
    }

    #[test]
    fn zeta_near_one_matches_direct_sum_with_tail() {
        // direct partial sum to 10^6 plus integral tail and midpoint correction
        let s = 1.2;
        let big = 1_000_000u64;
        let mut direct: f64 = (1..big).map(|k| (k as f64).powf(-s)).sum();
        direct += (big as f64).powf(1.0 - s) / (s - 1.0) + 0.5 * (big as f64).powf(-s);
        assert!((hurwitz_zeta(s, 1.0) - direct).abs() < 1e-9);
    }

    #[test]
    fn equal_degrees_are_rejected() {
        let err = fit_power_law(&[3; 50], None).unwrap_err();
        assert!(matches!(err, Error::PowerLaw(_)));
        assert!(fit_power_law(&[3, 3], Some(3)).is_err());
    }

    #[test]
    fn empty_or_invalid_input() {
        assert!(fit_power_law(&[], None).is_err());
        assert!(fit_power_law(&[1, 2, 3], Some(10)).is_err());
        assert!(fit_power_law(&[0, 2, 3], None).is_err());
    }

    #[test]
    fn fixed_x_min_ignores_values_below() {
        let data = [2u64, 3, 3, 4, 5, 8, 13, 2, 7, 2, 9];
        let mut padded = data.to_vec();
        padded.extend([1, 1, 1]);
        let a = fit_power_law(&data, Some(2)).unwrap();
        let b = fit_power_law(&padded, Some(2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_tail, data.len());
    }

    #[test]
    fn quantile_nearest_rank() {
        let v: Vec<u64> = (1..=10).collect();
        assert_eq!(quantile(&v, 0.9), 9);
        assert_eq!(quantile(&v, 1.0), 10);
        assert_eq!(quantile(&[4], 0.9), 4);
    }

    #[test]
    fn summary_examples() {
        let k5 = Graph::from_edges(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        let s = summary(&k5);
        assert_eq!((s.n, s.m, s.components, s.maximal_cliques), (5, 10, 1, 1));
        assert_eq!(s.density, Some(1.0));

        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let s = summary(&two);
        assert_eq!((s.components, s.maximal_cliques), (2, 2));
    }
}

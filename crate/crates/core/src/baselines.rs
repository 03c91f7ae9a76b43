//! Graph-to-feature strategies and the spectral baseline.

use nalgebra::DMatrix;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex cap for dense spectral decomposition.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Singular values below this fraction of `max(1, σ₁)` are reported as zero.
pub const SPECTRUM_ZERO_TOLERANCE: f64 = 1e-9;

/// Maps a graph to a fixed-length feature vector.
pub trait Decomposer: Send + Sync {
    fn name(&self) -> &str;

    /// Exactly `top_k` values, descending, zero-padded.
    fn features(&self, g: &Graph, top_k: usize) -> Result<Vec<f64>>;
}

/// Top clique-basis coefficients.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cliqster;

impl Decomposer for Cliqster {
    fn name(&self) -> &str {
        "cliqster"
    }

    fn features(&self, g: &Graph, top_k: usize) -> Result<Vec<f64>> {
        Ok(Decomposition::of(g)?.feature_vector(top_k))
    }
}

/// Top singular values of the adjacency matrix.
#[derive(Debug, Clone, Copy)]
pub struct Svd {
    pub dense_cap: usize,
}

impl Default for Svd {
    fn default() -> Self {
        Svd {
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

impl Decomposer for Svd {
    fn name(&self) -> &str {
        "svd"
    }

    fn features(&self, g: &Graph, top_k: usize) -> Result<Vec<f64>> {
        let mut spectrum = svd_spectrum_capped(g, self.dense_cap)?;
        spectrum.resize(top_k, 0.0);
        Ok(spectrum)
    }
}

/// Built-in strategies selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cliqster,
    Svd,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Cliqster, Method::Svd];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cliqster => "cliqster",
            Method::Svd => "svd",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "cliqster" => Ok(Method::Cliqster),
            "svd" => Ok(Method::Svd),
            other => Err(Error::InvalidParameter(format!(
                "unknown method `{other}` (expected cliqster or svd)"
            ))),
        }
    }

    pub fn decomposer(self) -> Box<dyn Decomposer> {
        match self {
            Method::Cliqster => Box::new(Cliqster),
            Method::Svd => Box::new(Svd::default()),
        }
    }
}

pub fn svd_spectrum(g: &Graph) -> Result<Vec<f64>> {
    svd_spectrum_capped(g, DEFAULT_DENSE_CAP)
}

/// Singular values of the symmetric adjacency matrix, non-increasing.
///
/// The adjacency matrix is block diagonal over connected components, so each
/// component is decomposed densely on its own and isolated vertices
/// contribute exact zeros.
pub fn svd_spectrum_capped(g: &Graph, dense_cap: usize) -> Result<Vec<f64>> {
    let n = g.n();
    if n == 0 {
        return Err(Error::TooFewVertices {
            what: "spectrum",
            min: 1,
            n,
        });
    }
    if n > dense_cap {
        return Err(Error::TooManyVertices {
            what: "dense spectral decomposition",
            max: dense_cap,
            n,
        });
    }
    let mut values = Vec::with_capacity(n);
    let mut local = vec![0usize; n];
    for comp in g.connected_components() {
        let size = comp.len();
        match size {
            1 => values.push(0.0),
            2 => values.extend([1.0, 1.0]),
            _ => {
                for (i, &v) in comp.iter().enumerate() {
                    local[v] = i;
                }
                let mut a = DMatrix::<f64>::zeros(size, size);
                for (i, &v) in comp.iter().enumerate() {
                    for &w in g.neighbors(v) {
                        a[(i, local[w])] = 1.0;
                    }
                }
                values.extend(a.symmetric_eigenvalues().iter().map(|x| x.abs()));
            }
        }
    }
    values.sort_by(|a, b| b.total_cmp(a));
    let floor = SPECTRUM_ZERO_TOLERANCE * values[0].max(1.0);
    for v in &mut values {
        if *v < floor {
            *v = 0.0;
        }
    }
    Ok(values)
}

pub fn svd_feature_vector(g: &Graph, top_k: usize) -> Result<Vec<f64>> {
    Svd::default().features(g, top_k)
}

/// Number of values strictly above the zero threshold.
pub fn effective_rank(values: &[f64]) -> usize {
    values.iter().filter(|&&v| v > 0.0).count()
}

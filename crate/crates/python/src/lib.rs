//! Python bindings.
//!
//! Graphs, decompositions and the spectral baseline are exposed as classes;
//! power-law fitting, synthetic profiles and the evaluation harness as
//! functions returning plain dicts and lists. Library errors surface as
//! `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cliqster_core::baselines::{self, Method};
use cliqster_core::cliques::enumerate_maximal_cliques;
use cliqster_core::decompose;
use cliqster_core::error::Error;
use cliqster_core::eval::{self, Category, ClassificationParams, DistinguishParams};
use cliqster_core::netstats;
use cliqster_core::seed;
use cliqster_core::synth;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Undirected simple graph on vertices `0..n`, with optional string labels.
#[pyclass(frozen, module = "cliqster")]
struct Graph {
    inner: cliqster_core::graph::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = cliqster_core::graph::Graph::from_edges(n, edges).map_err(err)?;
        Ok(Graph { inner })
    }

    /// Parses edge-list text: one `u v` pair per line, `#` comments.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        let inner = cliqster_core::graph::Graph::from_edge_list(text).map_err(err)?;
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn read(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)?;
        Self::from_edge_list(&text)
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list(&[])
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn density(&self) -> PyResult<f64> {
        self.inner.density().map_err(err)
    }

    fn connected_components(&self) -> Vec<Vec<usize>> {
        self.inner.connected_components()
    }

    fn induced_subgraph(&self, vertices: Vec<usize>) -> PyResult<Graph> {
        let inner = self.inner.induced_subgraph(&vertices).map_err(err)?;
        Ok(Graph { inner })
    }

    /// Uniform induced subgraph on `size` vertices with at least one edge.
    #[pyo3(signature = (size, seed=0))]
    fn sample_induced(&self, size: usize, seed: u64) -> PyResult<Graph> {
        let inner = self.inner.sample_induced(size, seed).map_err(err)?;
        Ok(Graph { inner })
    }

    /// Maximal cliques of size at least two as vertex-id lists, largest first.
    fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        enumerate_maximal_cliques(&self.inner)
            .iter()
            .map(|c| c.vertices().to_vec())
            .collect()
    }

    fn decompose(&self, py: Python<'_>) -> PyResult<Decomposition> {
        let g = &self.inner;
        let inner = py.detach(|| decompose::Decomposition::of(g)).map_err(err)?;
        Ok(Decomposition { inner })
    }

    /// Summary statistics as a dict.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = netstats::summary(&self.inner);
        let d = PyDict::new(py);
        d.set_item("n", s.n)?;
        d.set_item("m", s.m)?;
        d.set_item("components", s.components)?;
        d.set_item("density", s.density)?;
        d.set_item("max_degree", s.max_degree)?;
        d.set_item("degeneracy", s.degeneracy)?;
        d.set_item("maximal_cliques", s.maximal_cliques)?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// Clique basis, normal equations and least-squares coefficients of a graph.
#[pyclass(frozen, module = "cliqster")]
struct Decomposition {
    inner: decompose::Decomposition,
}

#[pymethods]
impl Decomposition {
    /// Basis cliques as vertex-id lists, in coefficient order.
    #[getter]
    fn cliques(&self) -> Vec<Vec<usize>> {
        self.inner
            .basis
            .cliques()
            .iter()
            .map(|c| c.vertices().to_vec())
            .collect()
    }

    #[getter]
    fn mu(&self) -> Vec<f64> {
        self.inner.mu().to_vec()
    }

    /// Ridge weight used by the solve; zero unless the Gram matrix was singular.
    #[getter]
    fn ridge(&self) -> f64 {
        self.inner.coefficients.ridge
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.coefficients.residual
    }

    /// Squared reconstruction error over all vertex pairs.
    fn objective(&self) -> f64 {
        self.inner.objective()
    }

    /// Dense Gram matrix `A` as a list of rows.
    fn gram_matrix(&self) -> Vec<Vec<f64>> {
        self.inner.system.to_dense()
    }

    fn gram_rhs(&self) -> Vec<f64> {
        self.inner.system.d().to_vec()
    }

    #[pyo3(signature = (top_k=20))]
    fn feature_vector(&self, top_k: usize) -> Vec<f64> {
        self.inner.feature_vector(top_k)
    }

    /// Covered pairs `(r, s)` with `r > s` mapped to `Z(r, s)`.
    fn generator(&self) -> Vec<((usize, usize), f64)> {
        self.inner.reconstruct().entries().to_vec()
    }

    /// One Bernoulli draw from the reconstructed generator.
    #[pyo3(signature = (seed=0))]
    fn sample_network(&self, seed: u64) -> Graph {
        Graph {
            inner: self.inner.reconstruct().sample_network(seed),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.basis.len()
    }

    fn __repr__(&self) -> String {
        format!("Decomposition(K={}, ridge={:e})", self.inner.basis.len(), self.inner.coefficients.ridge)
    }
}

fn method(name: &str) -> PyResult<Method> {
    Method::parse(name).map_err(err)
}

/// Singular values of the adjacency matrix, non-increasing.
#[pyfunction]
fn svd_spectrum(py: Python<'_>, g: &Graph) -> PyResult<Vec<f64>> {
    let g = &g.inner;
    py.detach(|| baselines::svd_spectrum(g)).map_err(err)
}

/// Top-k feature vector of `g` under `method` ("cliqster" or "svd").
#[pyfunction]
#[pyo3(signature = (g, method="cliqster", top_k=20))]
fn features(py: Python<'_>, g: &Graph, method: &str, top_k: usize) -> PyResult<Vec<f64>> {
    let dec = self::method(method)?.decomposer();
    let g = &g.inner;
    py.detach(|| dec.features(g, top_k)).map_err(err)
}

/// Discrete power-law fit; `x_min` is chosen by KS distance when omitted.
#[pyfunction]
#[pyo3(signature = (values, x_min=None))]
fn fit_power_law<'py>(py: Python<'py>, values: Vec<u64>, x_min: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let fit = netstats::fit_power_law(&values, x_min).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("alpha", fit.alpha)?;
    d.set_item("alpha_approx", fit.alpha_approx)?;
    d.set_item("x_min", fit.x_min)?;
    d.set_item("n_tail", fit.n_tail)?;
    d.set_item("ks", fit.ks)?;
    Ok(d)
}

/// Names of the builtin category profiles.
#[pyfunction]
fn profiles() -> Vec<String> {
    synth::builtin_profiles().into_iter().map(|p| p.name).collect()
}

fn profile(name: &str, n: Option<usize>, sample_scale: Option<f64>) -> PyResult<synth::CategoryProfile> {
    let mut p = synth::builtin_profile(name).map_err(err)?;
    if let Some(n) = n {
        p.n = n;
    }
    if let Some(s) = sample_scale {
        p.sample_scale = s;
    }
    Ok(p)
}

/// Synthetic network from a builtin profile.
#[pyfunction]
#[pyo3(signature = (profile, seed=0, n=None, sample_scale=None))]
fn synthesize(profile: &str, seed: u64, n: Option<usize>, sample_scale: Option<f64>) -> PyResult<Graph> {
    let p = self::profile(profile, n, sample_scale)?;
    Ok(Graph {
        inner: synth::generate(&p, seed).map_err(err)?,
    })
}

/// Categories from builtin profile names, generated as the CLI does.
fn categories(names: &[String], seed: u64) -> PyResult<Vec<Category>> {
    let stream = seed::derive(seed, 0);
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let p = profile(name, None, None)?;
            Ok(Category {
                label: p.name.clone(),
                graph: synth::generate(&p, seed::derive(stream, i as u64)).map_err(err)?,
            })
        })
        .collect()
}

/// Clustering error of each method on samples of the given profiles.
///
/// Returns `{method: {"errors": [...], "mean": float, "std": float}}`.
#[pyfunction]
#[pyo3(signature = (profiles, methods=vec!["cliqster".to_string(), "svd".to_string()], repeats=100, samples_per_category=20, sample_size=1000, top_k=20, restarts=8, normalize=false, seed=0))]
#[allow(clippy::too_many_arguments)]
fn distinguishability<'py>(
    py: Python<'py>,
    profiles: Vec<String>,
    methods: Vec<String>,
    repeats: usize,
    samples_per_category: usize,
    sample_size: usize,
    top_k: usize,
    restarts: usize,
    normalize: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cats = categories(&profiles, seed)?;
    let methods = methods.iter().map(|m| method(m)).collect::<PyResult<Vec<_>>>()?;
    let params = DistinguishParams {
        repeats,
        samples_per_category,
        sample_size,
        top_k,
        restarts,
        normalize,
        seed: seed::derive(seed, 1),
    };
    let report = py
        .detach(|| eval::run_distinguishability(&cats, &methods, &params))
        .map_err(err)?;
    let out = PyDict::new(py);
    for m in report.methods {
        let d = PyDict::new(py);
        d.set_item("errors", m.errors)?;
        d.set_item("mean", m.mean_error)?;
        d.set_item("std", m.std_error)?;
        out.set_item(m.method, d)?;
    }
    Ok(out)
}

/// k-NN accuracy per training size for a pair of profiles.
///
/// Returns a list of `(train_size, mean_accuracy, std_accuracy)`.
#[pyfunction]
#[pyo3(signature = (profiles, method="cliqster", train_sizes=vec![10, 20, 40, 60, 80, 100], test_size=100, knn_k=3, repeats=20, sample_size=1000, top_k=20, normalize=false, seed=0))]
#[allow(clippy::too_many_arguments)]
fn classification(
    py: Python<'_>,
    profiles: Vec<String>,
    method: &str,
    train_sizes: Vec<usize>,
    test_size: usize,
    knn_k: usize,
    repeats: usize,
    sample_size: usize,
    top_k: usize,
    normalize: bool,
    seed: u64,
) -> PyResult<Vec<(usize, f64, f64)>> {
    let cats = categories(&profiles, seed)?;
    let method = self::method(method)?;
    let params = ClassificationParams {
        train_sizes,
        test_size,
        knn_k,
        repeats,
        pool_per_category: None,
        sample_size,
        top_k,
        normalize,
        seed: seed::derive(seed, 1),
    };
    let points = py
        .detach(|| eval::run_classification(&cats, method, &params))
        .map_err(err)?;
    Ok(points.into_iter().map(|p| (p.train_size, p.mean, p.std)).collect())
}

/// Fraction of points misassigned under the best cluster-to-label matching.
#[pyfunction]
fn clustering_error(assignment: Vec<usize>, labels: Vec<usize>) -> PyResult<f64> {
    eval::clustering_error(&assignment, &labels).map_err(err)
}

#[pymodule]
fn cliqster(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Decomposition>()?;
    m.add_function(wrap_pyfunction!(svd_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(features, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(profiles, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(distinguishability, m)?)?;
    m.add_function(wrap_pyfunction!(classification, m)?)?;
    m.add_function(wrap_pyfunction!(clustering_error, m)?)?;
    Ok(())
}

//! Clique-basis decomposition of an unweighted network.
//!
//! A graph is modelled as `Y ~ Bernoulli(Z)` with `Z = Σₖ μₖ Bₖ`, where each
//! basis matrix `Bₖ` is the lower-triangular 0/1 indicator of the vertex pairs
//! inside maximal clique `k`. Dropping the `0 ≤ Z ≤ 1` constraints turns the
//! maximum-likelihood fit into the least-squares problem
//!
//! ```text
//! J(μ) = Σ_{r>s} (μᵀ b^{rs} − Y(r,s))²,   b^{rs} = (B₁(r,s), …, B_K(r,s))ᵀ
//! ```
//!
//! whose normal equations are `A μ = d` with `A = Σ b^{rs} b^{rs}ᵀ` and
//! `d = Σ Y(r,s) b^{rs}`. Only pairs inside some clique have a non-zero
//! `b^{rs}`, and every such pair is an edge, so both sums run over the edges
//! and `A(i, j)` is the number of edges shared by cliques `i` and `j`.
//!
//! `A` is block diagonal once cliques are grouped by shared edges; each block
//! is factored on its own.

use rand::Rng;

use crate::cliques::{enumerate_maximal_cliques, Clique};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::linalg::Cholesky;
use crate::seed;

/// Ridge weight, relative to the mean diagonal of `A`, applied when `A` is
/// numerically singular.
pub const RIDGE_SCALE: f64 = 1e-9;

/// Bound on `‖(A + λI)μ − d‖∞ / max(1, ‖d‖∞)` every solve must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CliqueBasis {
    n: usize,
    cliques: Vec<Clique>,
    edges: Vec<(Vertex, Vertex)>,
    membership: Vec<Vec<usize>>,
}

impl CliqueBasis {
    pub fn build(g: &Graph) -> Result<Self> {
        if g.m() == 0 {
            return Err(Error::NoEdges);
        }
        let cliques = enumerate_maximal_cliques(g);
        let mut membership = vec![Vec::new(); g.m()];
        for (k, clique) in cliques.iter().enumerate() {
            for (r, s) in clique.pairs() {
                let e = g
                    .edge_id(r, s)
                    .expect("clique pairs are edges of the host graph");
                membership[e].push(k);
            }
        }
        Ok(CliqueBasis {
            n: g.n(),
            cliques,
            edges: g.edges().to_vec(),
            membership,
        })
    }

    /// Number of basis elements, `K`.
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Vertex count of the host graph.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    /// Host graph edges, `(u, v)` with `u < v`, in edge-id order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Ascending indices of the cliques containing edge `edge`.
    pub fn membership(&self, edge: usize) -> &[usize] {
        &self.membership[edge]
    }

    /// `Bₖ(r, s)`: one exactly when `r > s` and both lie in clique `k`.
    pub fn indicator(&self, k: usize, r: Vertex, s: Vertex) -> f64 {
        let c = &self.cliques[k];
        if r > s && c.contains(r) && c.contains(s) {
            1.0
        } else {
            0.0
        }
    }
}

/// Normal equations `A μ = d`. `A` is held as sorted sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem {
    rows: Vec<Vec<(usize, f64)>>,
    d: Vec<f64>,
}

impl GramSystem {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(c, _)| c)
            .map(|at| row[at].1)
            .unwrap_or(0.0)
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Non-zero entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn trace(&self) -> f64 {
        (0..self.len()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let k = self.len();
        let mut out = vec![vec![0.0; k]; k];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[i][j] = v;
            }
        }
        out
    }

    /// `(A + ridge·I) x`.
    pub fn apply(&self, x: &[f64], ridge: f64) -> Vec<f64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&(j, v)| v * x[j]).sum::<f64>() + ridge * x[i])
            .collect()
    }

    /// `‖(A + ridge·I) x − d‖∞`.
    pub fn residual(&self, x: &[f64], ridge: f64) -> f64 {
        self.apply(x, ridge)
            .iter()
            .zip(&self.d)
            .map(|(ax, d)| (ax - d).abs())
            .fold(0.0, f64::max)
    }

    /// Groups of mutually coupled unknowns: the connected components of the
    /// sparsity pattern of `A`, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let k = self.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut index_of_root = vec![usize::MAX; k];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..k {
            let root = find(&mut parent, i);
            if index_of_root[root] == usize::MAX {
                index_of_root[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index_of_root[root]].push(i);
        }
        blocks
    }
}

/// Accumulates `A` and `d` from the per-edge membership lists in
/// `O(m + Σₑ |Lₑ|²)`.
pub fn assemble_system(basis: &CliqueBasis) -> GramSystem {
    let k = basis.len();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
    let mut d = vec![0.0; k];
    for list in &basis.membership {
        for &i in list {
            d[i] += 1.0;
            for &j in list {
                rows[i].push((j, 1.0));
            }
        }
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
        for &(j, v) in row.iter() {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += v,
                _ => merged.push((j, v)),
            }
        }
        *row = merged;
    }
    GramSystem { rows, d }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub mu: Vec<f64>,
    /// Ridge weight `λ` actually used; zero unless `A` was singular.
    pub ridge: f64,
    /// `‖(A + λI)μ − d‖∞` at the returned solution.
    pub residual: f64,
}

pub fn solve_coefficients(sys: &GramSystem) -> Result<CoefficientVector> {
    let k = sys.len();
    if k == 0 {
        return Ok(CoefficientVector {
            mu: Vec::new(),
            ridge: 0.0,
            residual: 0.0,
        });
    }
    let blocks = sys.blocks();
    let mu = match solve_blocks(sys, &blocks, 0.0) {
        Ok(mu) => (mu, 0.0),
        Err(_) => {
            let ridge = RIDGE_SCALE * sys.trace() / k as f64;
            let mu = solve_blocks(sys, &blocks, ridge).map_err(|column| {
                Error::Solver(format!(
                    "Gram matrix not positive definite at column {column} after ridge {ridge:e}"
                ))
            })?;
            (mu, ridge)
        }
    };
    let (mu, ridge) = mu;
    let residual = sys.residual(&mu, ridge);
    let scale = sys.d.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if !(residual <= RESIDUAL_TOLERANCE * scale) {
        return Err(Error::Solver(format!(
            "normal-equation residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(CoefficientVector {
        mu,
        ridge,
        residual,
    })
}

/// Solves `(A + ridge·I) μ = d` block by block, with one step of iterative
/// refinement per block. Fails with the offending global column index.
fn solve_blocks(sys: &GramSystem, blocks: &[Vec<usize>], ridge: f64) -> std::result::Result<Vec<f64>, usize> {
    let mut mu = vec![0.0; sys.len()];
    let mut local = vec![usize::MAX; sys.len()];
    for block in blocks {
        let size = block.len();
        if size == 1 {
            let i = block[0];
            let a = sys.get(i, i) + ridge;
            if !(a > 0.0) {
                return Err(i);
            }
            mu[i] = sys.d[i] / a;
            continue;
        }
        for (li, &i) in block.iter().enumerate() {
            local[i] = li;
        }
        let mut dense = vec![0.0; size * size];
        for (li, &i) in block.iter().enumerate() {
            for &(j, v) in sys.row(i) {
                dense[li * size + local[j]] = v;
            }
            dense[li * size + li] += ridge;
        }
        let rhs: Vec<f64> = block.iter().map(|&i| sys.d[i]).collect();
        // exact pivots of A + λI are at least λ, far above the roundoff in
        // them, while the relative floor of the plain solve may exceed λ
        let chol = if ridge > 0.0 {
            Cholesky::factor_with_floor(&dense, size, 0.5 * ridge)
        } else {
            Cholesky::factor(&dense, size)
        }
        .map_err(|e| block[e.column])?;
        let mut x = chol.solve(&rhs);
        let r: Vec<f64> = (0..size)
            .map(|i| rhs[i] - (0..size).map(|j| dense[i * size + j] * x[j]).sum::<f64>())
            .collect();
        for (xi, di) in x.iter_mut().zip(chol.solve(&r)) {
            *xi += di;
        }
        for (li, &i) in block.iter().enumerate() {
            mu[i] = x[li];
        }
    }
    Ok(mu)
}

/// Sparse lower triangle of `Z = Σₖ μₖ Bₖ`, keyed `(r, s)` with `r > s`.
/// Pairs outside every clique are implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    n: usize,
    entries: Vec<((Vertex, Vertex), f64)>,
}

impl GeneratorMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[((Vertex, Vertex), f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Z(r, s)` for either orientation of the pair.
    pub fn get(&self, r: Vertex, s: Vertex) -> f64 {
        let key = (r.max(s), r.min(s));
        self.entries
            .binary_search_by_key(&key, |&(p, _)| p)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    /// Draws `Y ~ Bernoulli(clamp(Z, 0, 1))` independently per covered pair.
    pub fn sample_network(&self, rng_seed: u64) -> Graph {
        let mut rng = seed::rng(rng_seed);
        let edges: Vec<(Vertex, Vertex)> = self
            .entries
            .iter()
            .filter(|&&(_, z)| rng.random::<f64>() < z.clamp(0.0, 1.0))
            .map(|&((r, s), _)| (s, r))
            .collect();
        Graph::from_edges(self.n, edges).expect("generator pairs are valid vertex pairs")
    }
}

/// Builds `Z` from solved coefficients: each covered pair sums the `μₖ` of
/// the cliques containing it.
pub fn reconstruct(basis: &CliqueBasis, coeffs: &CoefficientVector) -> GeneratorMatrix {
    let mut entries: Vec<((Vertex, Vertex), f64)> = basis
        .edges
        .iter()
        .zip(&basis.membership)
        .map(|(&(u, v), list)| ((v, u), list.iter().map(|&k| coeffs.mu[k]).sum()))
        .collect();
    entries.sort_unstable_by_key(|&(p, _)| p);
    GeneratorMatrix {
        n: basis.n,
        entries,
    }
}

/// Objective `J(μ)` summed over all vertex pairs. Pairs outside every clique
/// are non-edges with `μᵀb = 0` and contribute nothing.
pub fn objective(basis: &CliqueBasis, mu: &[f64]) -> f64 {
    basis
        .membership
        .iter()
        .map(|list| {
            let z: f64 = list.iter().map(|&k| mu[k]).sum();
            (z - 1.0) * (z - 1.0)
        })
        .sum()
}

/// The `top_k` largest coefficients, descending, zero-padded. Equal values
/// keep basis order (larger clique first, then lexicographic).
pub fn feature_vector(coeffs: &CoefficientVector, top_k: usize) -> Vec<f64> {
    let mut order: Vec<usize> = (0..coeffs.mu.len()).collect();
    order.sort_by(|&a, &b| coeffs.mu[b].total_cmp(&coeffs.mu[a]).then(a.cmp(&b)));
    let mut out: Vec<f64> = order.iter().take(top_k).map(|&k| coeffs.mu[k]).collect();
    out.resize(top_k, 0.0);
    out
}

/// Basis, normal equations and coefficients of one graph.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub basis: CliqueBasis,
    pub system: GramSystem,
    pub coefficients: CoefficientVector,
}

impl Decomposition {
    pub fn of(g: &Graph) -> Result<Self> {
        let basis = CliqueBasis::build(g)?;
        let system = assemble_system(&basis);
        let coefficients = solve_coefficients(&system)?;
        Ok(Decomposition {
            basis,
            system,
            coefficients,
        })
    }

    pub fn mu(&self) -> &[f64] {
        &self.coefficients.mu
    }

    pub fn reconstruct(&self) -> GeneratorMatrix {
        reconstruct(&self.basis, &self.coefficients)
    }

    pub fn objective(&self) -> f64 {
        objective(&self.basis, &self.coefficients.mu)
    }

    pub fn feature_vector(&self, top_k: usize) -> Vec<f64> {
        feature_vector(&self.coefficients, top_k)
    }
}

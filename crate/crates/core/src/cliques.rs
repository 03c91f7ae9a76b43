//! Maximal clique enumeration.
//!
//! The enumerator is Bron–Kerbosch with pivoting, driven by a degeneracy
//! ordering: each vertex `v` seeds one search whose candidate set is the part
//! of `N(v)` later in the ordering, so candidate sets never exceed the
//! degeneracy. Singleton cliques (isolated vertices) are not reported.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Largest graph `brute_force_maximal_cliques` accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clique {
    vertices: Vec<Vertex>,
}

impl Clique {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Clique { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Number of vertex pairs, `C(size, 2)`.
    pub fn pair_count(&self) -> usize {
        self.size() * self.size().saturating_sub(1) / 2
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Iterates `(r, s)` with `r > s` over every member pair.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .flat_map(move |(i, &s)| self.vertices[i + 1..].iter().map(move |&r| (r, s)))
    }
}

/// Size descending, then lexicographic on the sorted member lists.
pub fn canonical_order(a: &Clique, b: &Clique) -> Ordering {
    b.size().cmp(&a.size()).then_with(|| a.vertices.cmp(&b.vertices))
}

pub fn enumerate_maximal_cliques(g: &Graph) -> Vec<Clique> {
    let degeneracy = g.degeneracy_ordering();
    let position = degeneracy.position();
    let mut out = Vec::new();
    let mut current = Vec::new();
    for &v in &degeneracy.ordering {
        let (mut later, mut earlier) = (Vec::new(), Vec::new());
        for &w in g.neighbors(v) {
            if position[w] > position[v] {
                later.push(w);
            } else {
                earlier.push(w);
            }
        }
        current.push(v);
        expand(g, &mut current, later, earlier, &mut out);
        current.pop();
    }
    out.retain(|c: &Clique| c.size() >= 2);
    out.sort_by(canonical_order);
    out
}

/// Reports every maximal clique containing `current`, some of `candidates`,
/// and none of `excluded`. Both sets are sorted.
fn expand(
    g: &Graph,
    current: &mut Vec<Vertex>,
    mut candidates: Vec<Vertex>,
    mut excluded: Vec<Vertex>,
    out: &mut Vec<Clique>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(Clique::new(current.clone()));
        }
        return;
    }
    let pivot = choose_pivot(g, &candidates, &excluded);
    let branch: Vec<Vertex> = difference(&candidates, g.neighbors(pivot));
    for v in branch {
        let nv = g.neighbors(v);
        current.push(v);
        expand(
            g,
            current,
            intersection(&candidates, nv),
            intersection(&excluded, nv),
            out,
        );
        current.pop();
        let at = candidates.binary_search(&v).unwrap();
        candidates.remove(at);
        let at = excluded.binary_search(&v).unwrap_err();
        excluded.insert(at, v);
    }
}

/// Vertex of `candidates ∪ excluded` with the most neighbors in
/// `candidates`; lowest id wins ties.
fn choose_pivot(g: &Graph, candidates: &[Vertex], excluded: &[Vertex]) -> Vertex {
    let mut best = (usize::MAX, 0usize);
    for &u in candidates.iter().chain(excluded) {
        let score = intersection_count(candidates, g.neighbors(u));
        if score > best.1 || (score == best.1 && u < best.0) {
            best = (u, score);
        }
    }
    best.0
}

fn intersection(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersection_count(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn difference(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

/// Exhaustive reference enumerator: tests all `2^n` vertex subsets.
pub fn brute_force_maximal_cliques(g: &Graph) -> Result<Vec<Clique>> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooManyVertices {
            what: "brute-force clique enumeration",
            max: BRUTE_FORCE_MAX_VERTICES,
            n,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let is_clique = |set: u32| {
        (0..n).all(|v| set & (1 << v) == 0 || (set & !(1 << v)) & !adj[v] == 0)
    };
    let mut out = Vec::new();
    for set in 1u32..(1u32 << n) {
        if set.count_ones() < 2 || !is_clique(set) {
            continue;
        }
        let extendable = (0..n).any(|v| set & (1 << v) == 0 && set & !adj[v] == 0);
        if !extendable {
            out.push(Clique::new((0..n).filter(|&v| set & (1 << v) != 0).collect()));
        }
    }
    out.sort_by(canonical_order);
    Ok(out)
}

/// `(n − f)·3^(f/3)`, the largest possible number of maximal cliques in an
/// `n`-vertex graph of degeneracy `f`.
pub fn maximal_clique_bound(n: usize, degeneracy: usize) -> f64 {
    (n.saturating_sub(degeneracy)) as f64 * 3f64.powf(degeneracy as f64 / 3.0)
}

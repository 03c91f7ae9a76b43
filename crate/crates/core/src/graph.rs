//! Immutable undirected simple graphs.
//!
//! Vertices are contiguous ids `0..n`. Adjacency is stored in compressed
//! sparse row form with sorted neighbor lists, and every adjacency slot also
//! records the id of its edge so that pair lookups resolve to an edge index
//! in `O(log deg)`.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::seed;

pub type Vertex = usize;

/// Number of draws `sample_induced` makes before declaring the source too sparse.
pub const SAMPLE_RETRY_BUDGET: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    edge_ids: Vec<usize>,
    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    edges: Vec<(Vertex, Vertex)>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyResult {
    pub ordering: Vec<Vertex>,
    pub degeneracy: usize,
}

impl DegeneracyResult {
    /// Inverse of `ordering`: `position()[v]` is the index of `v` in the ordering.
    pub fn position(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ordering.len()];
        for (i, &v) in self.ordering.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate and reversed edges collapse;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        Ok(Self::from_canonical(n, list, None))
    }

    /// `edges` must hold `(u, v)` with `u < v < n`; duplicates are allowed.
    fn from_canonical(n: usize, mut edges: Vec<(Vertex, Vertex)>, labels: Option<Vec<String>>) -> Self {
        edges.sort_unstable();
        edges.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut edge_ids = vec![0; 2 * edges.len()];
        // Sorted (u, v) order delivers, for every vertex, its lower neighbors
        // (as back-references) before its higher ones, each ascending.
        for (id, &(u, v)) in edges.iter().enumerate() {
            neighbors[cursor[u]] = v;
            edge_ids[cursor[u]] = id;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            edge_ids[cursor[v]] = id;
            cursor[v] += 1;
        }
        debug_assert!((0..n).all(|v| neighbors[offsets[v]..offsets[v + 1]]
            .windows(2)
            .all(|w| w[0] < w[1])));

        Graph {
            offsets,
            neighbors,
            edge_ids,
            edges,
            labels,
        }
    }

    /// Parses an edge list: one `u v` pair per line, `#` comments, blank lines
    /// ignored. Tokens are interned in first-appearance order and kept as
    /// vertex labels.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut ids: HashMap<&str, Vertex> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::MalformedLine {
                        line: i + 1,
                        content: line.to_string(),
                    })
                }
            };
            if a == b {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    token: a.to_string(),
                });
            }
            let mut id_of = |t| {
                *ids.entry(t).or_insert_with(|| {
                    labels.push(t.to_string());
                    labels.len() - 1
                })
            };
            let (u, v) = (id_of(a), id_of(b));
            edges.push((u.min(v), u.max(v)));
        }
        let n = labels.len();
        Ok(Self::from_canonical(n, edges, Some(labels)))
    }

    /// Pads the vertex set to `n` with isolated vertices. Padded vertices get
    /// the smallest non-negative integer labels not already in use.
    pub fn with_vertex_count(self, n: usize) -> Result<Self> {
        if n < self.n() {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} is below the {} vertices named by edges",
                self.n()
            )));
        }
        let mut labels = self.labels();
        let mut used: BTreeSet<String> = labels.iter().cloned().collect();
        let mut next = 0usize;
        while labels.len() < n {
            while used.contains(&next.to_string()) {
                next += 1;
            }
            used.insert(next.to_string());
            labels.push(next.to_string());
        }
        Ok(Self::from_canonical(n, self.edges, Some(labels)))
    }

    /// Serializes as an edge list using vertex labels, preceded by `header`
    /// lines written as `#` comments.
    pub fn to_edge_list(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            let _ = writeln!(out, "# {h}");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", self.label(u), self.label(v));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Index into `edges()` of the pair `{u, v}`, if it is an edge.
    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let lo = self.offsets[u];
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.edge_ids[lo + i])
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn label(&self, v: Vertex) -> Cow<'_, str> {
        match &self.labels {
            Some(l) => Cow::Borrowed(l[v].as_str()),
            None => Cow::Owned(v.to_string()),
        }
    }

    /// Labels of all vertices; ids stand in when the graph was built unlabeled.
    pub fn labels(&self) -> Vec<String> {
        (0..self.n()).map(|v| self.label(v).into_owned()).collect()
    }

    /// Subgraph induced by `vertices`, relabeled contiguously in ascending id
    /// order. Labels carry over.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<Self> {
        let n = self.n();
        let mut keep: Vec<Vertex> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.last() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        let mut new_id = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &u) in keep.iter().enumerate() {
            for &w in self.neighbors(u) {
                let j = new_id[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| keep.iter().map(|&v| l[v].clone()).collect());
        Ok(Self::from_canonical(keep.len(), edges, labels))
    }

    /// Vertex set of a uniform `size`-subset whose induced subgraph has at
    /// least one edge, drawn from the stream keyed by `rng_seed`.
    pub fn sample_vertices(&self, size: usize, rng_seed: u64) -> Result<Vec<Vertex>> {
        let n = self.n();
        if size > n {
            return Err(Error::SampleTooLarge { size, n });
        }
        let mut rng = seed::rng(rng_seed);
        for _ in 0..SAMPLE_RETRY_BUDGET {
            let mut chosen = index::sample(&mut rng, n, size).into_vec();
            chosen.sort_unstable();
            if self.has_edge_within(&chosen) {
                return Ok(chosen);
            }
        }
        Err(Error::SparseSource {
            attempts: SAMPLE_RETRY_BUDGET,
        })
    }

    pub fn sample_induced(&self, size: usize, rng_seed: u64) -> Result<Self> {
        let chosen = self.sample_vertices(size, rng_seed)?;
        self.induced_subgraph(&chosen)
    }

    fn has_edge_within(&self, sorted: &[Vertex]) -> bool {
        let mut member = vec![false; self.n()];
        for &v in sorted {
            member[v] = true;
        }
        sorted
            .iter()
            .any(|&v| self.neighbors(v).iter().any(|&w| member[w]))
    }

    /// Components in order of their smallest vertex; each list is ascending.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn density(&self) -> Result<f64> {
        let n = self.n();
        if n < 2 {
            return Err(Error::TooFewVertices {
                what: "density",
                min: 2,
                n,
            });
        }
        Ok(self.m() as f64 / (n as f64 * (n as f64 - 1.0) / 2.0))
    }

    /// Smallest-last ordering: repeatedly removes a minimum-degree vertex,
    /// lowest id first among ties.
    pub fn degeneracy_ordering(&self) -> DegeneracyResult {
        let n = self.n();
        let mut degree = self.degrees();
        let max_deg = degree.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); max_deg + 1];
        for (v, &d) in degree.iter().enumerate() {
            buckets[d].insert(v);
        }
        let mut removed = vec![false; n];
        let mut ordering = Vec::with_capacity(n);
        let mut degeneracy = 0;
        let mut low = 0;
        for _ in 0..n {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop_first().unwrap();
            degeneracy = degeneracy.max(low);
            removed[v] = true;
            ordering.push(v);
            for &w in self.neighbors(v) {
                if !removed[w] {
                    let d = degree[w];
                    buckets[d].remove(&w);
                    buckets[d - 1].insert(w);
                    degree[w] = d - 1;
                    low = low.min(d - 1);
                }
            }
        }
        DegeneracyResult {
            ordering,
            degeneracy,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn parses_path() {
        let g = Graph::from_edge_list("1 2\n2 3").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.label(0), "1");
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn deduplicates_reversed_edges() {
        let g = Graph::from_edge_list("a b\nb a\na b").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = Graph::from_edge_list("# header\nx x").unwrap_err();
        assert_eq!(
            err,
            Error::SelfLoop {
                line: 2,
                token: "x".into()
            }
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            Graph::from_edge_list("1 2\n3\n").unwrap_err(),
            Error::MalformedLine { line: 2, .. }
        ));
        assert!(matches!(
            Graph::from_edge_list("1 2 0.5").unwrap_err(),
            Error::MalformedLine { line: 1, .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = Graph::from_edge_list("# c\n\n  a b  \n# d\nb c\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
    }

    #[test]
    fn edge_list_round_trip_keeps_tokens() {
        let g = Graph::from_edge_list("x y\nz x\ny z\nw z").unwrap();
        let text = g.to_edge_list(&["meta".to_string()]);
        assert!(text.starts_with("# meta\n"));
        let h = Graph::from_edge_list(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn vertex_count_padding() {
        let g = Graph::from_edge_list("0 2\n2 3").unwrap();
        let g = g.with_vertex_count(5).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.labels(), vec!["0", "2", "3", "1", "4"]);
        assert!(g.clone().with_vertex_count(2).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = complete(3);
        let e = tri.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!((e.n(), e.m()), (2, 1));

        let c5 = cycle(5);
        let all = c5.induced_subgraph(&[4, 3, 2, 1, 0]).unwrap();
        assert_eq!(all, c5);

        let p = c5.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);

        assert_eq!(
            c5.induced_subgraph(&[0, 7]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 7, n: 5 }
        );
    }

    #[test]
    fn sampling_examples() {
        let k10 = complete(10);
        let full = k10.sample_induced(10, 3).unwrap();
        assert_eq!(full, k10);

        let a = k10.sample_vertices(4, 99).unwrap();
        let b = k10.sample_vertices(4, 99).unwrap();
        assert_eq!(a, b);

        let k4 = k10.sample_induced(4, 5).unwrap();
        assert_eq!((k4.n(), k4.m()), (4, 6));

        assert_eq!(
            k10.sample_induced(11, 0).unwrap_err(),
            Error::SampleTooLarge { size: 11, n: 10 }
        );
    }

    #[test]
    fn sampling_an_edgeless_graph_exhausts_the_retry_budget() {
        let g = Graph::from_edges(50, []).unwrap();
        assert_eq!(
            g.sample_induced(10, 1).unwrap_err(),
            Error::SparseSource {
                attempts: SAMPLE_RETRY_BUDGET
            }
        );
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);

        let empty = Graph::from_edges(5, []).unwrap();
        assert_eq!(empty.connected_components().len(), 5);
    }

    #[test]
    fn density_examples() {
        assert_eq!(complete(4).density().unwrap(), 1.0);
        assert_eq!(Graph::from_edges(10, []).unwrap().density().unwrap(), 0.0);
        assert!(Graph::from_edges(1, []).unwrap().density().is_err());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(complete(6).degeneracy_ordering().degeneracy, 5);
        let star = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        assert_eq!(star.degeneracy_ordering().degeneracy, 1);
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = path.degeneracy_ordering();
        assert_eq!(d.degeneracy, 1);
        // lowest id among the degree-1 ends goes first
        assert_eq!(d.ordering, vec![0, 1, 2, 3]);
        assert_eq!(cycle(5).degeneracy_ordering().degeneracy, 2);
    }
}

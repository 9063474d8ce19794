//! Loopless connected multigraphs on dense vertex ids.
//!
//! A [`Multigraph`] is immutable once built. Structural edits (contraction,
//! subdivision, plying, products) return fresh graphs, and edits that renumber
//! vertices also return the old-to-new id map.

use crate::flow::FlowNetwork;
use crate::vertex_set::VertexSet;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({0}, {1}) has multiplicity zero")]
    ZeroMultiplicity(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cut side must be a proper nonempty subset")]
    EmptySide,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("source and sink terminals overlap")]
    TerminalsOverlap,
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("ply factor must be at least 1")]
    ZeroFactor,
    #[error("vertex set belongs to a graph on {got} vertices, expected {expected}")]
    UniverseMismatch { expected: usize, got: usize },
}

/// Minimum edge cut between two terminal sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    /// Number of crossing edges, counted with multiplicity.
    pub value: u64,
    /// Source side of the cut: contains every source terminal and no sink terminal.
    pub side: VertexSet,
}

#[derive(Clone)]
pub struct Multigraph {
    n: usize,
    mult: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.mult == other.mult
    }
}

impl Eq for Multigraph {}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Multigraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Multigraph {
    /// Builds a graph from `(u, v, multiplicity)` triples. Repeated pairs accumulate.
    pub fn build(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut mult = vec![0u32; n * n];
        for &(u, v, m) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            if m == 0 {
                return Err(GraphError::ZeroMultiplicity(u, v));
            }
            mult[u * n + v] += m;
            mult[v * n + u] += m;
        }
        let g = Self::from_matrix(n, mult);
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Assumes `mult` is symmetric with a zero diagonal; connectivity is not checked.
    fn from_matrix(n: usize, mult: Vec<u32>) -> Self {
        let adj = (0..n)
            .map(|u| {
                (0..n)
                    .filter_map(|v| {
                        let m = mult[u * n + v];
                        (m > 0).then_some((v, m))
                    })
                    .collect()
            })
            .collect();
        Multigraph { n, mult, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    /// Neighbors of `v` with edge multiplicities, in increasing id order.
    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, m)| m as u64).sum()
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges().map(|(_, _, m)| m as u64).sum()
    }

    /// Distinct adjacent pairs `(u, v, mult)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, m)| (u, v, m))
        })
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn cycle_rank(&self) -> u64 {
        self.edge_count() + 1 - self.n as u64
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.universe() != self.n {
            return Err(GraphError::UniverseMismatch { expected: self.n, got: s.universe() });
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        self.is_connected_subset(&self.all_vertices()).unwrap_or(false)
    }

    /// `|E(A, A^c)|` without the proper-subset check.
    pub(crate) fn boundary_size(&self, a: &VertexSet) -> u64 {
        a.iter()
            .flat_map(|u| self.adj[u].iter())
            .filter(|&&(v, _)| !a.contains(v))
            .map(|&(_, m)| m as u64)
            .sum()
    }

    /// Number of edges between `a` and its complement, with multiplicity.
    pub fn edge_cut(&self, a: &VertexSet) -> Result<u64, GraphError> {
        self.check_set(a)?;
        if a.is_empty() || a.is_full() {
            return Err(GraphError::EmptySide);
        }
        Ok(self.boundary_size(a))
    }

    /// Whether the subgraph induced on `b` is connected.
    pub fn is_connected_subset(&self, b: &VertexSet) -> Result<bool, GraphError> {
        self.check_set(b)?;
        let Some(start) = b.first() else {
            return Err(GraphError::EmptySet);
        };
        let mut seen = VertexSet::singleton(self.n, start);
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if b.contains(v) && !seen.contains(v) {
                    seen.insert(v);
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(count == b.len())
    }

    /// Minimum number of edges separating `sources` from `sinks`, with a side achieving it.
    ///
    /// Edge multiplicities act as integral capacities, so the value equals the
    /// maximum number of edge-disjoint paths between the terminal sets.
    pub fn min_cut_between(
        &self,
        sources: &VertexSet,
        sinks: &VertexSet,
    ) -> Result<CutResult, GraphError> {
        self.check_set(sources)?;
        self.check_set(sinks)?;
        if sources.is_empty() || sinks.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if sources.intersects(sinks) {
            return Err(GraphError::TerminalsOverlap);
        }
        let mut net = FlowNetwork::from_graph(self, sources, sinks);
        let value = net.max_flow();
        let side = net.source_side(self.n);
        Ok(CutResult { value, side })
    }

    fn require_edge(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v || self.mult(u, v) == 0 {
            return Err(GraphError::NotAnEdge(u, v));
        }
        Ok(())
    }

    /// Contracts the edge bundle between `u` and `v`.
    ///
    /// The merged vertex takes id `min(u, v)`; vertices above `max(u, v)` shift down
    /// by one. Parallel `u`-`v` edges disappear rather than becoming loops. Returns the
    /// new graph and the old-to-new id map.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<(Multigraph, Vec<usize>), GraphError> {
        self.require_edge(u, v)?;
        let (keep, gone) = (u.min(v), u.max(v));
        let map: Vec<usize> = (0..self.n)
            .map(|x| match x.cmp(&gone) {
                std::cmp::Ordering::Less => x,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => x - 1,
            })
            .collect();
        let m = self.n - 1;
        let mut mult = vec![0u32; m * m];
        for (a, b, k) in self.edges() {
            let (x, y) = (map[a], map[b]);
            if x != y {
                mult[x * m + y] += k;
                mult[y * m + x] += k;
            }
        }
        Ok((Self::from_matrix(m, mult), map))
    }

    /// Replaces one parallel `u`-`v` edge by a path through a new vertex with id `n`.
    pub fn subdivide_edge(&self, u: usize, v: usize) -> Result<Multigraph, GraphError> {
        self.require_edge(u, v)?;
        let m = self.n + 1;
        let mut mult = vec![0u32; m * m];
        for (a, b, k) in self.edges() {
            mult[a * m + b] = k;
            mult[b * m + a] = k;
        }
        let w = self.n;
        mult[u * m + v] -= 1;
        mult[v * m + u] -= 1;
        for x in [u, v] {
            mult[x * m + w] += 1;
            mult[w * m + x] += 1;
        }
        Ok(Self::from_matrix(m, mult))
    }

    /// Multiplies every multiplicity by `factor`.
    pub fn ply(&self, factor: u32) -> Result<Multigraph, GraphError> {
        if factor == 0 {
            return Err(GraphError::ZeroFactor);
        }
        let mult = self.mult.iter().map(|&k| k * factor).collect();
        Ok(Self::from_matrix(self.n, mult))
    }

    /// The simple graph with the same adjacency.
    pub fn underlying_simple(&self) -> Multigraph {
        let mult = self.mult.iter().map(|&k| k.min(1)).collect();
        Self::from_matrix(self.n, mult)
    }

    /// Whether every multiplicity is at most one.
    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&k| k <= 1)
    }

    /// Induced or spanning subgraph check under an explicit vertex injection:
    /// every edge of `self` must be present in `host` with at least the same multiplicity.
    pub fn embeds_into(&self, host: &Multigraph, injection: &[usize]) -> bool {
        if injection.len() != self.n || injection.iter().any(|&x| x >= host.n) {
            return false;
        }
        let mut seen = vec![false; host.n];
        for &x in injection {
            if std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        self.edges()
            .all(|(u, v, k)| host.mult(injection[u], injection[v]) >= k)
    }
}

/// Cartesian product `g1 □ g2`; vertex `(a, b)` gets id `a * |V(g2)| + b`.
pub fn cartesian_product(g1: &Multigraph, g2: &Multigraph) -> Multigraph {
    let shape = ProductShape::of(g1, g2);
    let n = shape.vertex_count();
    let mut mult = vec![0u32; n * n];
    let mut link = |x: usize, y: usize, k: u32| {
        mult[x * n + y] = k;
        mult[y * n + x] = k;
    };
    for a in 0..g1.n {
        for (b, c, k) in g2.edges() {
            link(shape.id(a, b), shape.id(a, c), k);
        }
    }
    for b in 0..g2.n {
        for (a, c, k) in g1.edges() {
            link(shape.id(a, b), shape.id(c, b), k);
        }
    }
    Multigraph::from_matrix(n, mult)
}

/// Id layout of a Cartesian product: `left` factor vertices index columns,
/// `right` factor vertices index rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductShape {
    pub left: usize,
    pub right: usize,
}

impl ProductShape {
    pub fn new(left: usize, right: usize) -> Self {
        ProductShape { left, right }
    }

    pub fn of(g1: &Multigraph, g2: &Multigraph) -> Self {
        ProductShape { left: g1.n(), right: g2.n() }
    }

    pub fn vertex_count(&self) -> usize {
        self.left * self.right
    }

    pub fn id(&self, a: usize, b: usize) -> usize {
        a * self.right + b
    }

    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x / self.right, x % self.right)
    }

    /// Column `C_a = {(a, b) : b}` over the left-factor vertex `a`.
    pub fn column(&self, a: usize) -> VertexSet {
        VertexSet::from_vertices(self.vertex_count(), (0..self.right).map(|b| self.id(a, b)))
    }

    /// Row `R_b = {(a, b) : a}` over the right-factor vertex `b`.
    pub fn row(&self, b: usize) -> VertexSet {
        VertexSet::from_vertices(self.vertex_count(), (0..self.left).map(|a| self.id(a, b)))
    }

    pub fn transposed(&self) -> Self {
        ProductShape { left: self.right, right: self.left }
    }

    /// Maps the id of `(a, b)` under this shape to the id of `(b, a)` under the transpose.
    pub fn transpose_id(&self, x: usize) -> usize {
        let (a, b) = self.coords(x);
        self.transposed().id(b, a)
    }

    /// Whether `g` is, under this id layout, the product of two factor graphs:
    /// edges only join vertices sharing a row or a column, and every column
    /// (resp. row) carries the same edge multiset.
    pub fn fits(&self, g: &Multigraph) -> bool {
        if self.vertex_count() != g.n() {
            return false;
        }
        for (x, y, k) in g.edges() {
            let (a, b) = self.coords(x);
            let (c, d) = self.coords(y);
            let ok = if a == c {
                g.mult(self.id(0, b), self.id(0, d)) == k
            } else if b == d {
                g.mult(self.id(a, 0), self.id(c, 0)) == k
            } else {
                false
            };
            if !ok {
                return false;
            }
        }
        // Reverse direction: edges of the base column/row must repeat everywhere.
        for b in 0..self.right {
            for d in (b + 1)..self.right {
                let k = g.mult(self.id(0, b), self.id(0, d));
                if (0..self.left).any(|a| g.mult(self.id(a, b), self.id(a, d)) != k) {
                    return false;
                }
            }
        }
        for a in 0..self.left {
            for c in (a + 1)..self.left {
                let k = g.mult(self.id(a, 0), self.id(c, 0));
                if (0..self.right).any(|b| g.mult(self.id(a, b), self.id(c, b)) != k) {
                    return false;
                }
            }
        }
        true
    }

    /// All nontrivial shapes (both factors with at least two vertices) that `g` fits.
    pub fn detect(g: &Multigraph) -> Vec<ProductShape> {
        let n = g.n();
        (2..n)
            .filter(|a| n.is_multiple_of(*a) && n / a >= 2)
            .map(|a| ProductShape::new(a, n / a))
            .filter(|s| s.fits(g))
            .collect()
    }
}

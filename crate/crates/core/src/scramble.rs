//! Scrambles, their order, and order certificates.
//!
//! The order of a scramble is the minimum of two quantities: the hitting number
//! (smallest vertex set meeting every egg) and the cut number (fewest edges
//! separating some egg from another egg). Both are computed exactly and returned
//! with witnesses that can be re-checked independently.

use crate::families::{fig2_wheel, FIG2_EGGS};
use crate::graph::{GraphError, Multigraph, ProductShape};
use crate::par;
use crate::vertex_set::VertexSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScrambleError {
    #[error("scramble has no eggs")]
    Empty,
    #[error("egg {0} is empty")]
    EmptyEgg(usize),
    #[error("egg {0} is not connected")]
    DisconnectedEgg(usize),
    #[error("egg {index} lives on a graph with {got} vertices, expected {expected}")]
    WrongGraph { index: usize, expected: usize, got: usize },
    #[error("graph does not carry the requested product layout")]
    NoColumnMetadata,
    #[error("columns need at least two vertices to be punctured")]
    ColumnTooSmall,
    #[error("source graph is not a subgraph of the target under the given injection")]
    NotASubgraph,
    #[error("target graph is not the stated edge subdivision of the source")]
    NotASubdivision,
    #[error("an egg consists only of the subdivision vertex")]
    SubdivisionVertexEgg,
    #[error("graph has {n} vertices, above the exhaustive-search cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A nonempty set of connected vertex sets ("eggs") of one graph.
///
/// Eggs are kept sorted and free of duplicates, so egg indices are stable for a
/// given set of eggs regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scramble {
    n: usize,
    eggs: Vec<VertexSet>,
}

impl Scramble {
    pub fn new(g: &Multigraph, eggs: Vec<VertexSet>) -> Result<Self, ScrambleError> {
        if eggs.is_empty() {
            return Err(ScrambleError::Empty);
        }
        for (i, e) in eggs.iter().enumerate() {
            if e.universe() != g.n() {
                return Err(ScrambleError::WrongGraph { index: i, expected: g.n(), got: e.universe() });
            }
            if e.is_empty() {
                return Err(ScrambleError::EmptyEgg(i));
            }
            if !g.is_connected_subset(e)? {
                return Err(ScrambleError::DisconnectedEgg(i));
            }
        }
        let mut eggs = eggs;
        eggs.sort();
        eggs.dedup();
        Ok(Scramble { n: g.n(), eggs })
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists<I, E>(g: &Multigraph, eggs: I) -> Result<Self, ScrambleError>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        let n = g.n();
        let mut sets = Vec::new();
        for (i, egg) in eggs.into_iter().enumerate() {
            let vs: Vec<usize> = egg.into_iter().collect();
            if let Some(&bad) = vs.iter().find(|&&v| v >= n) {
                return Err(GraphError::VertexOutOfRange { vertex: bad, n }.into());
            }
            if vs.is_empty() {
                return Err(ScrambleError::EmptyEgg(i));
            }
            sets.push(VertexSet::from_vertices(n, vs));
        }
        Self::new(g, sets)
    }

    pub fn eggs(&self) -> &[VertexSet] {
        &self.eggs
    }

    pub fn len(&self) -> usize {
        self.eggs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eggs.is_empty()
    }

    /// Vertex count of the graph the scramble lives on.
    pub fn universe(&self) -> usize {
        self.n
    }
}

/// Cut number of a scramble: finite, or infinite when no two eggs are disjoint.
///
/// `Finite(_)` sorts below `Infinite`, so `min` behaves as expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutBound {
    Finite(u64),
    Infinite,
}

impl CutBound {
    pub fn finite(self) -> Option<u64> {
        match self {
            CutBound::Finite(v) => Some(v),
            CutBound::Infinite => None,
        }
    }
}

impl fmt::Display for CutBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutBound::Finite(v) => write!(f, "{v}"),
            CutBound::Infinite => f.write_str("inf"),
        }
    }
}

/// Egg pair realizing the cut number, with a minimum separating side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutWitness {
    /// Index of the egg contained in `side`.
    pub egg_a: usize,
    /// Index of the egg contained in the complement of `side`.
    pub egg_b: usize,
    pub side: VertexSet,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    pub order: u64,
    pub hitting_number: u64,
    pub hitting_set: VertexSet,
    pub cut_number: CutBound,
    pub cut_witness: Option<CutWitness>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("hitting set misses egg {0}")]
    MissedEgg(usize),
    #[error("hitting set has {got} vertices, certificate claims {claimed}")]
    HittingSize { claimed: u64, got: u64 },
    #[error("cut witness does not separate its egg pair")]
    NotSeparating,
    #[error("cut side has {got} crossing edges, certificate claims {claimed}")]
    CutValue { claimed: u64, got: u64 },
    #[error("finite cut number without a witness, or a witness for an infinite one")]
    WitnessShape,
    #[error("two disjoint eggs exist but the cut number is infinite")]
    DisjointEggsIgnored,
    #[error("order is not the minimum of hitting and cut numbers")]
    OrderMismatch,
}

impl OrderCertificate {
    /// Re-checks every witness against the graph and scramble. This confirms the
    /// witnesses are valid upper bounds; optimality is not re-proved.
    pub fn verify(&self, g: &Multigraph, s: &Scramble) -> Result<(), CertificateError> {
        if let Some(i) = s.eggs().iter().position(|e| !e.intersects(&self.hitting_set)) {
            return Err(CertificateError::MissedEgg(i));
        }
        let got = self.hitting_set.len() as u64;
        if got != self.hitting_number {
            return Err(CertificateError::HittingSize { claimed: self.hitting_number, got });
        }
        match (&self.cut_number, &self.cut_witness) {
            (CutBound::Finite(value), Some(w)) => {
                let (a, b) = (&s.eggs()[w.egg_a], &s.eggs()[w.egg_b]);
                if !a.is_subset(&w.side) || !b.is_disjoint(&w.side) {
                    return Err(CertificateError::NotSeparating);
                }
                let got = g.boundary_size(&w.side);
                if got != *value || w.value != *value {
                    return Err(CertificateError::CutValue { claimed: *value, got });
                }
            }
            (CutBound::Infinite, None) => {
                let eggs = s.eggs();
                for i in 0..eggs.len() {
                    for j in (i + 1)..eggs.len() {
                        if eggs[i].is_disjoint(&eggs[j]) {
                            return Err(CertificateError::DisjointEggsIgnored);
                        }
                    }
                }
            }
            _ => return Err(CertificateError::WitnessShape),
        }
        let expect = match self.cut_number {
            CutBound::Finite(c) => c.min(self.hitting_number),
            CutBound::Infinite => self.hitting_number,
        };
        if expect != self.order {
            return Err(CertificateError::OrderMismatch);
        }
        Ok(())
    }
}

struct HittingSearch<'a> {
    eggs: &'a [VertexSet],
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl HittingSearch<'_> {
    /// Size of a greedy family of pairwise disjoint eggs among `open`: a lower
    /// bound on the vertices still needed.
    fn packing_bound(&self, open: &[usize]) -> usize {
        let mut order: Vec<usize> = open.to_vec();
        order.sort_by_key(|&i| (self.eggs[i].len(), i));
        let mut used: Option<VertexSet> = None;
        let mut count = 0;
        for i in order {
            let e = &self.eggs[i];
            match &mut used {
                None => {
                    used = Some(e.clone());
                    count += 1;
                }
                Some(u) if u.is_disjoint(e) => {
                    *u = u.union(e);
                    count += 1;
                }
                _ => {}
            }
        }
        count
    }

    fn run(&mut self, open: &[usize]) {
        if open.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + self.packing_bound(open) >= self.best.len() {
            return;
        }
        let &branch = open
            .iter()
            .min_by_key(|&&i| (self.eggs[i].len(), i))
            .expect("open is nonempty");
        for v in self.eggs[branch].iter() {
            let rest: Vec<usize> = open.iter().copied().filter(|&i| !self.eggs[i].contains(v)).collect();
            self.chosen.push(v);
            self.run(&rest);
            self.chosen.pop();
        }
    }
}

fn greedy_hitting_set(eggs: &[VertexSet], n: usize) -> Vec<usize> {
    let mut open: Vec<usize> = (0..eggs.len()).collect();
    let mut chosen = Vec::new();
    while !open.is_empty() {
        let v = (0..n)
            .max_by_key(|&v| {
                let hits = open.iter().filter(|&&i| eggs[i].contains(v)).count();
                (hits, std::cmp::Reverse(v))
            })
            .expect("graph has vertices");
        chosen.push(v);
        open.retain(|&i| !eggs[i].contains(v));
    }
    chosen
}

/// Minimum size of a vertex set meeting every egg, with a witness.
///
/// Branch and bound: branch on the vertices of a smallest unhit egg, pruning with
/// a greedy packing of disjoint unhit eggs.
pub fn hitting_number(s: &Scramble) -> (u64, VertexSet) {
    let eggs = s.eggs();
    let greedy = greedy_hitting_set(eggs, s.n);
    let mut search = HittingSearch {
        eggs,
        best: greedy,
        chosen: Vec::new(),
    };
    let all: Vec<usize> = (0..eggs.len()).collect();
    search.run(&all);
    let set = VertexSet::from_vertices(s.n, search.best.iter().copied());
    (set.len() as u64, set)
}

/// Minimum over pairs of disjoint eggs of the minimum cut separating them.
///
/// Pairs are independent max-flow problems; the witness is the pair with the
/// smallest value, ties going to the lexicographically smallest index pair.
pub fn cut_number(g: &Multigraph, s: &Scramble) -> (CutBound, Option<CutWitness>) {
    let eggs = s.eggs();
    let mut pairs = Vec::new();
    for i in 0..eggs.len() {
        for j in (i + 1)..eggs.len() {
            if eggs[i].is_disjoint(&eggs[j]) {
                pairs.push((i, j));
            }
        }
    }
    let cuts = par::map(&pairs, |&(i, j)| {
        let cut = g
            .min_cut_between(&eggs[i], &eggs[j])
            .expect("disjoint nonempty eggs are valid terminals");
        (cut.value, i, j, cut.side)
    });
    match cuts.into_iter().min_by_key(|c| (c.0, c.1, c.2)) {
        None => (CutBound::Infinite, None),
        Some((value, egg_a, egg_b, side)) => (
            CutBound::Finite(value),
            Some(CutWitness { egg_a, egg_b, side, value }),
        ),
    }
}

/// Scramble order with both witnesses.
pub fn scramble_order(g: &Multigraph, s: &Scramble) -> OrderCertificate {
    let (hitting_number, hitting_set) = hitting_number(s);
    let (cut_number, cut_witness) = cut_number(g, s);
    let order = match cut_number {
        CutBound::Finite(c) => c.min(hitting_number),
        CutBound::Infinite => hitting_number,
    };
    OrderCertificate {
        order,
        hitting_number,
        hitting_set,
        cut_number,
        cut_witness,
    }
}

/// Every vertex as its own egg.
pub fn singleton_scramble(g: &Multigraph) -> Scramble {
    let eggs = (0..g.n()).map(|v| VertexSet::singleton(g.n(), v)).collect();
    Scramble::new(g, eggs).expect("single vertices are connected")
}

/// The single egg `V(G)`.
pub fn whole_graph_scramble(g: &Multigraph) -> Scramble {
    Scramble::new(g, vec![g.all_vertices()]).expect("graphs are connected")
}

/// The columns `C_v` of a product graph.
pub fn columns_scramble(g: &Multigraph, shape: ProductShape) -> Result<Scramble, ScrambleError> {
    if !shape.fits(g) {
        return Err(ScrambleError::NoColumnMetadata);
    }
    Scramble::new(g, (0..shape.left).map(|a| shape.column(a)).collect())
}

/// The rows `R_w` of a product graph, i.e. the columns of the transposed product.
pub fn rows_scramble(g: &Multigraph, shape: ProductShape) -> Result<Scramble, ScrambleError> {
    if !shape.fits(g) {
        return Err(ScrambleError::NoColumnMetadata);
    }
    Scramble::new(g, (0..shape.right).map(|b| shape.row(b)).collect())
}

/// Columns with one vertex removed: one egg `C_v \ {(v, w)}` per vertex `(v, w)`.
pub fn punctured_columns_scramble(g: &Multigraph, shape: ProductShape) -> Result<Scramble, ScrambleError> {
    if !shape.fits(g) {
        return Err(ScrambleError::NoColumnMetadata);
    }
    if shape.right < 2 {
        return Err(ScrambleError::ColumnTooSmall);
    }
    let eggs = (0..g.n())
        .map(|x| {
            let (a, _) = shape.coords(x);
            let mut egg = shape.column(a);
            egg.remove(x);
            egg
        })
        .collect();
    Scramble::new(g, eggs)
}

/// The four-egg scramble on [`fig2_wheel`]: three rim pairs and the hub.
pub fn fig2_scramble() -> Scramble {
    Scramble::from_lists(&fig2_wheel(), FIG2_EGGS.iter().map(|e| e.iter().copied()))
        .expect("rim pairs and hub are connected")
}

/// Reinterprets a scramble on `sub` as a scramble on `host`, mapping vertex `x` of
/// `sub` to `injection[x]`. Requires every edge of `sub` to be present in `host`.
pub fn subgraph_transport(
    s: &Scramble,
    sub: &Multigraph,
    host: &Multigraph,
    injection: &[usize],
) -> Result<Scramble, ScrambleError> {
    if s.universe() != sub.n() || !sub.embeds_into(host, injection) {
        return Err(ScrambleError::NotASubgraph);
    }
    let eggs = s
        .eggs()
        .iter()
        .map(|e| VertexSet::from_vertices(host.n(), e.iter().map(|x| injection[x])))
        .collect();
    Scramble::new(host, eggs)
}

fn check_subdivision(
    g: &Multigraph,
    subdivided: &Multigraph,
    v: usize,
    w: usize,
) -> Result<(), ScrambleError> {
    match g.subdivide_edge(v, w) {
        Ok(expected) if &expected == subdivided => Ok(()),
        _ => Err(ScrambleError::NotASubdivision),
    }
}

/// Carries a scramble on `g` to `subdivided = g.subdivide_edge(v, w)`: eggs
/// containing `v` gain the new vertex, the rest are unchanged. The order is unchanged.
pub fn subdivision_transport(
    s: &Scramble,
    g: &Multigraph,
    subdivided: &Multigraph,
    v: usize,
    w: usize,
) -> Result<Scramble, ScrambleError> {
    check_subdivision(g, subdivided, v, w)?;
    if s.universe() != g.n() {
        return Err(ScrambleError::NotASubdivision);
    }
    let u = g.n();
    let eggs = s
        .eggs()
        .iter()
        .map(|e| {
            let mut lifted = VertexSet::from_vertices(subdivided.n(), e.iter());
            if e.contains(v) {
                lifted.insert(u);
            }
            lifted
        })
        .collect();
    Scramble::new(subdivided, eggs)
}

/// Carries a scramble on `subdivided = g.subdivide_edge(v, w)` back to `g` by
/// dropping the subdivision vertex from every egg. Fails if some egg is exactly
/// that vertex. The order does not drop when it is at least 3.
pub fn subdivision_restrict(
    s: &Scramble,
    g: &Multigraph,
    subdivided: &Multigraph,
    v: usize,
    w: usize,
) -> Result<Scramble, ScrambleError> {
    check_subdivision(g, subdivided, v, w)?;
    if s.universe() != subdivided.n() {
        return Err(ScrambleError::NotASubdivision);
    }
    let u = g.n();
    let mut eggs = Vec::with_capacity(s.len());
    for e in s.eggs() {
        let kept = VertexSet::from_vertices(g.n(), e.iter().filter(|&x| x != u));
        if kept.is_empty() {
            return Err(ScrambleError::SubdivisionVertexEgg);
        }
        eggs.push(kept);
    }
    Scramble::new(g, eggs)
}

/// Whether the union of every pair of eggs is connected.
pub fn is_bramble(g: &Multigraph, s: &Scramble) -> bool {
    let eggs = s.eggs();
    (0..eggs.len()).all(|i| {
        ((i + 1)..eggs.len()).all(|j| {
            eggs[i].intersects(&eggs[j])
                || g.is_connected_subset(&eggs[i].union(&eggs[j])).unwrap_or(false)
        })
    })
}

/// Whether every pair of eggs intersects.
pub fn is_strict_bramble(s: &Scramble) -> bool {
    let eggs = s.eggs();
    (0..eggs.len()).all(|i| ((i + 1)..eggs.len()).all(|j| eggs[i].intersects(&eggs[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fig4_left, path, plied_path, random_tree, stacked_prism, torus, cycle};

    #[test]
    fn construction_validates_eggs() {
        let g = path(3).unwrap();
        assert_eq!(Scramble::new(&g, vec![]), Err(ScrambleError::Empty));
        assert_eq!(
            Scramble::from_lists(&g, [vec![0, 2]]),
            Err(ScrambleError::DisconnectedEgg(0))
        );
        assert_eq!(Scramble::from_lists(&g, [Vec::<usize>::new()]), Err(ScrambleError::EmptyEgg(0)));
        let s = Scramble::from_lists(&g, [vec![1], vec![0, 1], vec![1]]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(Scramble::from_lists(&g, [vec![5]]).is_err());
    }

    #[test]
    fn plied_path_singletons() {
        let g = plied_path(3).unwrap();
        let cert = scramble_order(&g, &singleton_scramble(&g));
        assert_eq!(cert.hitting_number, 3);
        assert_eq!(cert.order, 3);
        cert.verify(&g, &singleton_scramble(&g)).unwrap();
    }

    #[test]
    fn named_product_scrambles() {
        let g = stacked_prism(4, 2).unwrap();
        let s = columns_scramble(&g, ProductShape::new(4, 2)).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.eggs().iter().all(|e| e.len() == 2));
        let cert = scramble_order(&g, &s);
        assert_eq!((cert.hitting_number, cert.order), (4, 4));

        let t = torus(4, 4).unwrap();
        let p = punctured_columns_scramble(&t, ProductShape::new(4, 4)).unwrap();
        assert_eq!(p.len(), 16);
        assert!(p.eggs().iter().all(|e| e.len() == 3));
        assert_eq!(hitting_number(&p).0, 8);

        assert_eq!(
            columns_scramble(&cycle(8).unwrap(), ProductShape::new(4, 2)),
            Err(ScrambleError::NoColumnMetadata)
        );
    }

    #[test]
    fn wheel_scramble_has_order_four() {
        let s = fig2_scramble();
        let g = fig2_wheel();
        let cert = scramble_order(&g, &s);
        assert_eq!(cert.cut_number, CutBound::Finite(4));
        assert_eq!(cert.order, 4);
        cert.verify(&g, &s).unwrap();
        // Rim eggs are consecutive pairs on the hexagon, so every two eggs are
        // joined by a rim edge or by a spoke.
        assert!(is_bramble(&g, &s));
        assert!(!is_strict_bramble(&s));
    }

    #[test]
    fn strict_brambles_have_infinite_cut_number() {
        let g = path(5).unwrap();
        let s = Scramble::from_lists(&g, [vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        assert!(is_strict_bramble(&s));
        let cert = scramble_order(&g, &s);
        assert_eq!(cert.cut_number, CutBound::Infinite);
        assert_eq!(cert.order, cert.hitting_number);
        assert_eq!(cert.order, 1);

        let whole = whole_graph_scramble(&g);
        assert!(is_strict_bramble(&whole));
        assert_eq!(scramble_order(&g, &whole).order, 1);
    }

    #[test]
    fn tree_singletons_have_order_one() {
        let t = random_tree(8, 3).unwrap();
        let cert = scramble_order(&t, &singleton_scramble(&t));
        assert_eq!(cert.cut_number, CutBound::Finite(1));
        assert_eq!(cert.order, 1);
    }

    #[test]
    fn transports() {
        let c4 = cycle(4).unwrap();
        let p4 = path(4).unwrap();
        let s = singleton_scramble(&p4);
        let before = scramble_order(&p4, &s).order;
        let moved = subgraph_transport(&s, &p4, &c4, &[0, 1, 2, 3]).unwrap();
        assert!(scramble_order(&c4, &moved).order >= before);
        assert_eq!(subgraph_transport(&s, &c4, &p4, &[0, 1, 2, 3]), Err(ScrambleError::NotASubgraph));

        let left = fig4_left();
        let right = left.subdivide_edge(1, 3).unwrap();
        let s = singleton_scramble(&left);
        let lifted = subdivision_transport(&s, &left, &right, 1, 3).unwrap();
        assert!(lifted.eggs().iter().any(|e| e.to_vec() == vec![1, 6]));
        assert!(lifted.eggs().iter().any(|e| e.to_vec() == vec![3]));
        assert!(scramble_order(&right, &lifted).order >= scramble_order(&left, &s).order);
        assert_eq!(
            subdivision_transport(&s, &left, &left, 1, 3),
            Err(ScrambleError::NotASubdivision)
        );

        let back = subdivision_restrict(&lifted, &left, &right, 1, 3).unwrap();
        assert_eq!(back, s);
        let bad = singleton_scramble(&right);
        assert_eq!(
            subdivision_restrict(&bad, &left, &right, 1, 3),
            Err(ScrambleError::SubdivisionVertexEgg)
        );
    }
}

//! Exact treewidth by dynamic programming over vertex subsets.
//!
//! For a set `S` of vertices eliminated first, `tw(S)` is the best width any
//! ordering of `S` achieves, and
//!
//! ```text
//! tw(S) = min over v in S of max(tw(S \ {v}), q(S \ {v}, v))
//! ```
//!
//! where `q(S, v)` counts the vertices outside `S ∪ {v}` reachable from `v` through
//! `S`. Multiplicities are ignored: the underlying simple graph is used.

use crate::graph::Multigraph;
use crate::vertex_set::VertexSet;
use thiserror::Error;

/// Default vertex cap; the table has `2^n` entries.
pub const DEFAULT_VERTEX_CAP: usize = 20;
const HARD_CAP: usize = 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreewidthError {
    #[error("graph has {n} vertices, above the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("elimination order is not a permutation of the vertices")]
    NotAPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreewidthResult {
    pub width: usize,
    pub elimination_order: Vec<usize>,
}

fn adjacency_masks(g: &Multigraph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &(w, _)| m | 1 << w))
        .collect()
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q(adj: &[u64], s: u64, v: usize) -> u32 {
    let mut reach = 1u64 << v;
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let x = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[x];
        }
        let grow = next & s & !reach;
        reach |= next & s;
        frontier = grow;
    }
    let mut boundary = 0;
    let mut r = reach;
    while r != 0 {
        let x = r.trailing_zeros() as usize;
        r &= r - 1;
        boundary |= adj[x];
    }
    (boundary & !s & !(1u64 << v)).count_ones()
}

fn best_for(adj: &[u64], table: &[u8], s: u64) -> u8 {
    let mut best = u8::MAX;
    let mut rest = s;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let without = s & !(1 << v);
        let w = table[without as usize].max(q(adj, without, v) as u8);
        best = best.min(w);
    }
    best
}

/// Subsets of an `n`-element ground set with exactly `k` members, in increasing order.
fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut s: u64 = (1 << k) - 1;
    while s < limit {
        out.push(s);
        // Gosper's hack: next larger integer with the same popcount.
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

#[cfg(feature = "parallel")]
fn layer_values(adj: &[u64], table: &[u8], layer: &[u64]) -> Vec<u8> {
    use rayon::prelude::*;
    layer.par_iter().map(|&s| best_for(adj, table, s)).collect()
}

#[cfg(not(feature = "parallel"))]
fn layer_values(adj: &[u64], table: &[u8], layer: &[u64]) -> Vec<u8> {
    layer.iter().map(|&s| best_for(adj, table, s)).collect()
}

/// Exact treewidth with an optimal elimination order. `vertex_cap` bounds the
/// exponential table; `None` uses [`DEFAULT_VERTEX_CAP`].
pub fn treewidth(g: &Multigraph, vertex_cap: Option<usize>) -> Result<TreewidthResult, TreewidthError> {
    let n = g.n();
    let cap = vertex_cap.unwrap_or(DEFAULT_VERTEX_CAP).min(HARD_CAP);
    if n > cap {
        return Err(TreewidthError::TooLarge { n, cap });
    }
    let adj = adjacency_masks(g);
    let mut table = vec![0u8; 1 << n];
    // Each layer only reads the previous one, so a layer can be filled in parallel.
    for k in 1..=n {
        let layer = subsets_of_size(n, k);
        let values = layer_values(&adj, &table, &layer);
        for (s, w) in layer.into_iter().zip(values) {
            table[s as usize] = w;
        }
    }
    let full = (1u64 << n) - 1;
    let width = table[full as usize];
    let mut order = vec![0; n];
    let mut s = full;
    for pos in (0..n).rev() {
        let v = (0..n)
            .find(|&v| {
                s >> v & 1 == 1 && {
                    let without = s & !(1 << v);
                    table[without as usize].max(q(&adj, without, v) as u8) == table[s as usize]
                }
            })
            .expect("some vertex attains the minimum");
        order[pos] = v;
        s &= !(1 << v);
    }
    Ok(TreewidthResult { width: width as usize, elimination_order: order })
}

/// Width of an elimination order: the largest number of not-yet-eliminated
/// neighbours a vertex has when it is eliminated, with fill-in.
pub fn width_of_order(g: &Multigraph, order: &[usize]) -> Result<usize, TreewidthError> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(TreewidthError::NotAPermutation);
    }
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(TreewidthError::NotAPermutation);
        }
    }
    let mut adj: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet::from_vertices(n, g.neighbors(v).iter().map(|&(w, _)| w)))
        .collect();
    let mut width = 0;
    for &x in order {
        let nbrs = adj[x].clone();
        width = width.max(nbrs.len());
        for a in nbrs.iter() {
            adj[a].remove(x);
            for b in nbrs.iter() {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    Ok(width)
}

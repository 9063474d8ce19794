//! Brute-force reference implementations, written straight from the
//! definitions. They use only the graph's multiplicities, never the library's
//! own algorithms, so they can serve as independent oracles.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scramblekit::Multigraph;

pub type Mask = u64;

pub fn full(n: usize) -> Mask {
    (1u64 << n) - 1
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| m >> i & 1 == 1)
}

/// Edges leaving `a`, counted with multiplicity.
pub fn cut(g: &Multigraph, a: Mask) -> u64 {
    let mut total = 0;
    for u in members(a) {
        for v in 0..g.n() {
            if a >> v & 1 == 0 {
                total += g.mult(u, v) as u64;
            }
        }
    }
    total
}

pub fn connected(g: &Multigraph, set: Mask) -> bool {
    if set == 0 {
        return false;
    }
    let mut seen = 1u64 << set.trailing_zeros();
    loop {
        let mut grow = seen;
        for u in members(seen) {
            for v in members(set) {
                if g.mult(u, v) > 0 {
                    grow |= 1 << v;
                }
            }
        }
        if grow == seen {
            return seen == set;
        }
        seen = grow;
    }
}

pub fn connected_sets(g: &Multigraph) -> Vec<Mask> {
    (1..=full(g.n())).filter(|&m| connected(g, m)).collect()
}

/// Smallest vertex set meeting every egg, by trying every subset.
pub fn hitting_number(n: usize, eggs: &[Mask]) -> u64 {
    (0..=full(n))
        .filter(|&c| eggs.iter().all(|&e| e & c != 0))
        .map(|c| c.count_ones() as u64)
        .min()
        .unwrap()
}

/// Fewest edges leaving a set that contains one egg and misses another;
/// `None` when no set does.
pub fn cut_number(g: &Multigraph, eggs: &[Mask]) -> Option<u64> {
    (1..full(g.n()))
        .filter(|&a| eggs.iter().any(|&e| e & !a == 0) && eggs.iter().any(|&e| e & a == 0))
        .map(|a| cut(g, a))
        .min()
}

pub fn order(g: &Multigraph, eggs: &[Mask]) -> u64 {
    let h = hitting_number(g.n(), eggs);
    cut_number(g, eggs).map_or(h, |c| c.min(h))
}

/// Scramble number over every family of connected sets. Exponential in the
/// number of connected sets; use only on very small graphs.
pub fn scramble_number(g: &Multigraph) -> u64 {
    let sets = connected_sets(g);
    assert!(sets.len() <= 20, "too many connected sets for exhaustive search");
    (1u32..1 << sets.len())
        .map(|f| {
            let eggs: Vec<Mask> = (0..sets.len()).filter(|&i| f >> i & 1 == 1).map(|i| sets[i]).collect();
            order(g, &eggs)
        })
        .max()
        .unwrap()
}

pub fn fire(g: &Multigraph, chips: &[i64], a: Mask) -> Vec<i64> {
    let mut out = chips.to_vec();
    for u in members(a) {
        for v in 0..g.n() {
            if a >> v & 1 == 0 {
                let m = g.mult(u, v) as i64;
                out[u] -= m;
                out[v] += m;
            }
        }
    }
    out
}

/// Definition of `v`-reduced: no nonempty set avoiding `v` can fire and stay effective.
pub fn is_reduced(g: &Multigraph, chips: &[i64], v: usize) -> bool {
    let others = full(g.n()) & !(1 << v);
    let mut a = others;
    while a != 0 {
        if fire(g, chips, a).iter().all(|&c| c >= 0) {
            return false;
        }
        a = (a - 1) & others;
    }
    true
}

/// Fires any legal set avoiding `v` until none is left. Every such sequence
/// terminates in the unique `v`-reduced divisor.
pub fn reduce(g: &Multigraph, chips: &[i64], v: usize) -> Vec<i64> {
    let others = full(g.n()) & !(1 << v);
    let mut current = chips.to_vec();
    'outer: loop {
        let mut a = others;
        while a != 0 {
            let next = fire(g, &current, a);
            if next.iter().all(|&c| c >= 0) {
                current = next;
                continue 'outer;
            }
            a = (a - 1) & others;
        }
        return current;
    }
}

pub fn positive_rank(g: &Multigraph, chips: &[i64]) -> bool {
    (0..g.n()).all(|v| reduce(g, chips, v)[v] >= 1)
}

/// Every effective divisor of the given degree on `n` vertices.
pub fn effective_divisors(n: usize, degree: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(n, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, degree, &mut Vec::new(), &mut out);
    out
}

pub fn gonality(g: &Multigraph) -> u64 {
    (1..)
        .find(|&d| effective_divisors(g.n(), d).iter().any(|c| positive_rank(g, c)))
        .unwrap() as u64
}

/// Treewidth as the best elimination width over all vertex orders.
pub fn treewidth(g: &Multigraph) -> usize {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |p| best = best.min(elimination_width(g, p)));
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub fn elimination_width(g: &Multigraph, order: &[usize]) -> usize {
    let n = g.n();
    let mut adj: Vec<Mask> = (0..n)
        .map(|u| (0..n).filter(|&v| g.mult(u, v) > 0).fold(0, |m, v| m | 1 << v))
        .collect();
    let mut width = 0;
    for &x in order {
        let nb = adj[x];
        width = width.max(nb.count_ones() as usize);
        for a in members(nb) {
            adj[a] = (adj[a] | nb) & !(1 << a) & !(1 << x);
        }
    }
    width
}

/// Every connected multigraph on `n` vertices with multiplicities at most `max_mult`.
pub fn all_multigraphs(n: usize, max_mult: u32) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let base = max_mult as u64 + 1;
    let total = base.pow(pairs.len() as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut edges = Vec::new();
            for &(a, b) in &pairs {
                let m = (code % base) as u32;
                code /= base;
                if m > 0 {
                    edges.push((a, b, m));
                }
            }
            Multigraph::build(n, &edges).ok()
        })
        .collect()
}

/// A connected vertex set grown from a random vertex.
pub fn random_connected_set(g: &Multigraph, rng: &mut ChaCha8Rng, max_size: usize) -> Mask {
    let n = g.n();
    let mut set = 1u64 << rng.gen_range(0..n);
    let target = rng.gen_range(1..=max_size.min(n));
    while (set.count_ones() as usize) < target {
        let frontier: Vec<usize> = (0..n)
            .filter(|&v| set >> v & 1 == 0 && members(set).any(|u| g.mult(u, v) > 0))
            .collect();
        match frontier.choose(rng) {
            Some(&v) => set |= 1 << v,
            None => break,
        }
    }
    set
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

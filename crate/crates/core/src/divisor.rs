//! Divisors and chip-firing: set firing, reduction by iterated burning,
//! linear equivalence, positive rank, and exhaustive gonality search.

use crate::graph::Multigraph;
use crate::par;
use crate::vertex_set::VertexSet;
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error("firing set must be a proper nonempty subset of the vertices")]
    BadSet,
    #[error("divisor is not effective")]
    NotEffective,
    #[error("divisor has {got} entries but the graph has {expected} vertices")]
    GraphMismatch { expected: usize, got: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("no positive-rank divisor of degree at most {0}")]
    CapExceeded(u64),
}

/// Integer chip count per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    chips: Vec<i64>,
}

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Divisor { chips: vec![0; n] }
    }

    pub fn from_chips(chips: Vec<i64>) -> Self {
        Divisor { chips }
    }

    /// `k` chips on vertex `v`, none elsewhere.
    pub fn point(n: usize, v: usize, k: i64) -> Self {
        let mut d = Self::zero(n);
        d.chips[v] = k;
        d
    }

    pub fn chips(&self) -> &[i64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn get(&self, v: usize) -> i64 {
        self.chips[v]
    }

    pub fn degree(&self) -> i64 {
        self.chips.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.iter().all(|&c| c >= 0)
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_vertices(self.len(), (0..self.len()).filter(|&v| self.chips[v] != 0))
    }

    /// Adds `k` chips at `v`.
    pub fn add_chips(&mut self, v: usize, k: i64) {
        self.chips[v] += k;
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        Divisor {
            chips: self.chips.iter().zip(&other.chips).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Divisor{:?}", self.chips)
    }
}

impl fmt::Display for Divisor {
    /// Formal sum such as `2*v0 + v3`; the zero divisor prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &c) in self.chips.iter().enumerate().filter(|(_, &c)| c != 0) {
            match (first, c < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            match c.abs() {
                1 => write!(f, "v{v}")?,
                k => write!(f, "{k}*v{v}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One step of a firing script: fire `set` a total of `times` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiringStep {
    pub set: VertexSet,
    pub times: u64,
}

/// Ordered sequence of set firings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiringScript {
    pub steps: Vec<FiringStep>,
}

impl FiringScript {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the script to `d`, returning every intermediate divisor after
    /// each individual firing (the last entry is the final result).
    pub fn replay(&self, g: &Multigraph, d: &Divisor) -> Vec<Divisor> {
        let mut trail = Vec::new();
        let mut current = d.clone();
        for step in &self.steps {
            for _ in 0..step.times {
                fire_unchecked(g, &mut current.chips, &step.set, 1);
                trail.push(current.clone());
            }
        }
        trail
    }

    /// Result of applying the script to `d`.
    pub fn apply(&self, g: &Multigraph, d: &Divisor) -> Divisor {
        let mut chips = d.chips.clone();
        for step in &self.steps {
            fire_unchecked(g, &mut chips, &step.set, step.times as i64);
        }
        Divisor { chips }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityResult {
    pub gonality: u64,
    /// Lexicographically least base-reduced effective divisor of minimum degree with positive rank.
    pub witness: Divisor,
}

fn check_len(g: &Multigraph, d: &Divisor) -> Result<(), DivisorError> {
    if d.len() != g.n() {
        return Err(DivisorError::GraphMismatch { expected: g.n(), got: d.len() });
    }
    Ok(())
}

fn check_effective(g: &Multigraph, d: &Divisor) -> Result<(), DivisorError> {
    check_len(g, d)?;
    if !d.is_effective() {
        return Err(DivisorError::NotEffective);
    }
    Ok(())
}

fn check_vertex(g: &Multigraph, v: usize) -> Result<(), DivisorError> {
    if v >= g.n() {
        return Err(DivisorError::VertexOutOfRange(v));
    }
    Ok(())
}

fn fire_unchecked(g: &Multigraph, chips: &mut [i64], set: &VertexSet, times: i64) {
    for u in set {
        for &(v, m) in g.neighbors(u) {
            if !set.contains(v) {
                chips[u] -= times * m as i64;
                chips[v] += times * m as i64;
            }
        }
    }
}

/// Fires every vertex of `a` once.
pub fn fire_set(g: &Multigraph, d: &Divisor, a: &VertexSet) -> Result<Divisor, DivisorError> {
    check_len(g, d)?;
    if a.universe() != g.n() || a.is_empty() || a.is_full() {
        return Err(DivisorError::BadSet);
    }
    let mut chips = d.chips.clone();
    fire_unchecked(g, &mut chips, a, 1);
    Ok(Divisor { chips })
}

/// Runs one burning pass from `v` and returns the vertices left unburnt.
///
/// A vertex catches fire once the number of edges joining it to burnt vertices
/// exceeds its chip count. The unburnt set is empty exactly when the divisor is
/// `v`-reduced, and otherwise it can fire without any vertex going into debt.
fn unburnt(g: &Multigraph, chips: &[i64], v: usize) -> VertexSet {
    let n = g.n();
    let mut burnt = vec![false; n];
    let mut heat = vec![0i64; n];
    burnt[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &(w, m) in g.neighbors(u) {
            if !burnt[w] {
                heat[w] += m as i64;
                if heat[w] > chips[w] {
                    burnt[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    VertexSet::from_vertices(n, (0..n).filter(|&u| !burnt[u]))
}

/// Largest number of consecutive firings of `set` that keeps every vertex out of debt.
fn max_legal_firings(g: &Multigraph, chips: &[i64], set: &VertexSet) -> u64 {
    set.iter()
        .filter_map(|u| {
            let out: i64 = g
                .neighbors(u)
                .iter()
                .filter(|&&(w, _)| !set.contains(w))
                .map(|&(_, m)| m as i64)
                .sum();
            (out > 0).then(|| (chips[u] / out) as u64)
        })
        .min()
        .unwrap_or(0)
}

/// Iterated burning towards `v`. With `stop_when_positive`, returns as soon as `v`
/// holds a chip. Each round fires the unburnt set as many times as stays legal.
fn reduce_chips(
    g: &Multigraph,
    chips: &mut [i64],
    v: usize,
    stop_when_positive: bool,
    mut script: Option<&mut FiringScript>,
) {
    loop {
        if stop_when_positive && chips[v] > 0 {
            return;
        }
        let set = unburnt(g, chips, v);
        if set.is_empty() {
            return;
        }
        let times = max_legal_firings(g, chips, &set);
        debug_assert!(times >= 1, "unburnt set must be able to fire");
        fire_unchecked(g, chips, &set, times as i64);
        if let Some(s) = script.as_deref_mut() {
            s.steps.push(FiringStep { set, times });
        }
    }
}

/// The unique `v`-reduced divisor equivalent to the effective divisor `d`, with the
/// script of fired sets (each avoiding `v`, every intermediate divisor effective).
pub fn reduce(g: &Multigraph, d: &Divisor, v: usize) -> Result<(Divisor, FiringScript), DivisorError> {
    check_effective(g, d)?;
    check_vertex(g, v)?;
    let mut chips = d.chips.clone();
    let mut script = FiringScript::default();
    reduce_chips(g, &mut chips, v, false, Some(&mut script));
    Ok((Divisor { chips }, script))
}

/// Whether the effective divisor `d` is `v`-reduced: a single burning pass from `v`
/// burns the whole graph.
pub fn is_reduced(g: &Multigraph, d: &Divisor, v: usize) -> Result<bool, DivisorError> {
    check_effective(g, d)?;
    check_vertex(g, v)?;
    Ok(unburnt(g, &d.chips, v).is_empty())
}

fn positive_rank_unchecked(g: &Multigraph, chips: &[i64]) -> bool {
    let mut work = chips.to_vec();
    (0..g.n()).all(|v| {
        if chips[v] > 0 {
            return true;
        }
        work.copy_from_slice(chips);
        reduce_chips(g, &mut work, v, true, None);
        work[v] > 0
    })
}

/// Whether every vertex lies in the support of the corresponding reduced representative.
pub fn has_positive_rank(g: &Multigraph, d: &Divisor) -> Result<bool, DivisorError> {
    check_effective(g, d)?;
    Ok(positive_rank_unchecked(g, &d.chips))
}

/// Advances `c` to the next vector in ascending lexicographic order with the
/// same sum, keeping `c[0] >= 1`. Returns false when `c` was the last one.
fn next_candidate(c: &mut [i64]) -> bool {
    let n = c.len();
    let pivot = if c[n - 1] > 0 {
        n - 2
    } else {
        match (0..n - 1).rev().find(|&j| c[j] > 0) {
            Some(0) | None => return false,
            Some(j) => j - 1,
        }
    };
    let tail: i64 = c[pivot + 1..].iter().sum();
    c[pivot] += 1;
    for x in &mut c[pivot + 1..] {
        *x = 0;
    }
    c[n - 1] = tail - 1;
    true
}

const GONALITY_BATCH: usize = 2048;

/// Exact gonality by exhaustive search.
///
/// Degrees are tried in increasing order. Every positive-rank class contains its
/// reduced representative at the base vertex 0, which then holds a chip there, so
/// only effective divisors with `chips[0] >= 1` that are 0-reduced are tested.
/// Candidates are visited in ascending lexicographic order and the first passing
/// one is the witness, independent of how the work is split across threads.
/// `max_degree` defaults to the vertex count, which always suffices (one chip on
/// every vertex has positive rank).
pub fn gonality(g: &Multigraph, max_degree: Option<u64>) -> Result<GonalityResult, DivisorError> {
    let n = g.n();
    if n < 2 {
        return Err(DivisorError::TooSmall);
    }
    let cap = max_degree.unwrap_or(n as u64);
    for d in 1..=cap {
        let mut current = vec![0i64; n];
        current[0] = 1;
        current[n - 1] += d as i64 - 1;
        let mut more = true;
        while more {
            let mut batch = Vec::with_capacity(GONALITY_BATCH);
            while more && batch.len() < GONALITY_BATCH {
                batch.push(current.clone());
                more = next_candidate(&mut current);
            }
            let hit = par::find_first_map(&batch, |chips| {
                (unburnt(g, chips, 0).is_empty() && positive_rank_unchecked(g, chips))
                    .then(|| chips.clone())
            });
            if let Some(chips) = hit {
                return Ok(GonalityResult { gonality: d, witness: Divisor { chips } });
            }
        }
    }
    Err(DivisorError::CapExceeded(cap))
}

/// BFS distances from `root` in the connected graph `g`.
fn distances(g: &Multigraph, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Moves all debt onto `q` by firing distance balls around `q`, outermost layer first.
fn clear_debt_towards(g: &Multigraph, chips: &mut [i64], q: usize) {
    let dist = distances(g, q);
    let depth = dist.iter().copied().max().unwrap_or(0);
    for r in (0..depth).rev() {
        let ball = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&u| dist[u] <= r));
        // Firing the radius-r ball only changes layers r and r + 1; every vertex of
        // layer r + 1 receives at least one chip per firing.
        let times = (0..g.n())
            .filter(|&u| dist[u] == r + 1 && chips[u] < 0)
            .map(|u| {
                let inward: i64 = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&(w, _)| dist[w] == r)
                    .map(|&(_, m)| m as i64)
                    .sum();
                (-chips[u] + inward - 1) / inward
            })
            .max()
            .unwrap_or(0);
        if times > 0 {
            fire_unchecked(g, chips, &ball, times);
        }
    }
}

/// Linear equivalence of two divisors of the same graph.
///
/// Both divisors are moved to be effective away from vertex 0, shifted by a
/// common number of chips at vertex 0, and compared through their 0-reduced forms.
pub fn equivalent(g: &Multigraph, d1: &Divisor, d2: &Divisor) -> Result<bool, DivisorError> {
    check_len(g, d1)?;
    check_len(g, d2)?;
    if d1.degree() != d2.degree() {
        return Ok(false);
    }
    let mut a = d1.chips.clone();
    let mut b = d2.chips.clone();
    clear_debt_towards(g, &mut a, 0);
    clear_debt_towards(g, &mut b, 0);
    let shift = (-a[0]).max(-b[0]).max(0);
    a[0] += shift;
    b[0] += shift;
    reduce_chips(g, &mut a, 0, false, None);
    reduce_chips(g, &mut b, 0, false, None);
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{chain_of_loops, cycle, fig1_graph, grid, path, random_tree, FIG1_MARKED_VERTEX};

    fn vs(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied())
    }

    #[test]
    fn fire_examples() {
        let c4 = cycle(4).unwrap();
        let d = Divisor::point(4, 0, 2);
        let fired = fire_set(&c4, &d, &vs(4, &[0])).unwrap();
        assert_eq!(fired.chips(), &[0, 1, 0, 1]);

        let p3 = path(3).unwrap();
        let fired = fire_set(&p3, &Divisor::point(3, 2, 1), &vs(3, &[2])).unwrap();
        assert_eq!(fired, Divisor::point(3, 1, 1));

        assert_eq!(fire_set(&p3, &d, &vs(3, &[0])).unwrap_err(), DivisorError::GraphMismatch { expected: 3, got: 4 });
        assert_eq!(fire_set(&p3, &Divisor::zero(3), &VertexSet::full(3)), Err(DivisorError::BadSet));
        assert_eq!(fire_set(&p3, &Divisor::zero(3), &VertexSet::empty(3)), Err(DivisorError::BadSet));
    }

    #[test]
    fn firing_a_set_then_its_complement_is_identity() {
        let g = grid(2, 3).unwrap();
        let d = Divisor::from_chips(vec![1, -2, 0, 3, 0, 1]);
        let a = vs(6, &[0, 4, 5]);
        let once = fire_set(&g, &d, &a).unwrap();
        assert_eq!(once.degree(), d.degree());
        assert_eq!(fire_set(&g, &once, &a.complement()).unwrap(), d);
    }

    #[test]
    fn reduce_examples() {
        let p3 = path(3).unwrap();
        let (r, script) = reduce(&p3, &Divisor::point(3, 2, 1), 0).unwrap();
        assert_eq!(r, Divisor::point(3, 0, 1));
        assert_eq!(script.apply(&p3, &Divisor::point(3, 2, 1)), r);

        let c4 = cycle(4).unwrap();
        let d = Divisor::point(4, 0, 2);
        let (r, script) = reduce(&c4, &d, 2).unwrap();
        assert_eq!(r, Divisor::point(4, 2, 2));
        for step in &script.steps {
            assert!(!step.set.contains(2));
        }
        assert!(script.replay(&c4, &d).iter().all(Divisor::is_effective));

        let (r, script) = reduce(&p3, &Divisor::point(3, 0, 1), 0).unwrap();
        assert_eq!(r, Divisor::point(3, 0, 1));
        assert!(script.is_empty());

        assert_eq!(
            reduce(&p3, &Divisor::from_chips(vec![1, -1, 1]), 0),
            Err(DivisorError::NotEffective)
        );
    }

    #[test]
    fn reduced_checks() {
        let p3 = path(3).unwrap();
        assert!(is_reduced(&p3, &Divisor::point(3, 0, 1), 0).unwrap());
        let c4 = cycle(4).unwrap();
        assert!(!is_reduced(&c4, &Divisor::from_chips(vec![0, 1, 0, 1]), 2).unwrap());
    }

    #[test]
    fn positive_rank_examples() {
        let c4 = cycle(4).unwrap();
        assert!(has_positive_rank(&c4, &Divisor::point(4, 0, 2)).unwrap());
        assert!(!has_positive_rank(&c4, &Divisor::point(4, 0, 1)).unwrap());
        let g = fig1_graph();
        assert!(has_positive_rank(&g, &Divisor::point(8, FIG1_MARKED_VERTEX, 3)).unwrap());
        for seed in 0..5 {
            let t = random_tree(7, seed).unwrap();
            for w in 0..7 {
                assert!(has_positive_rank(&t, &Divisor::point(7, w, 1)).unwrap());
            }
        }
    }

    #[test]
    fn candidate_order_is_lexicographic() {
        let mut c = vec![1, 0, 1];
        let mut seen = vec![c.clone()];
        while next_candidate(&mut c) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![1, 0, 1], vec![1, 1, 0], vec![2, 0, 0]]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn small_gonalities() {
        assert_eq!(gonality(&path(5).unwrap(), None).unwrap().gonality, 1);
        assert_eq!(gonality(&cycle(5).unwrap(), None).unwrap().gonality, 2);
        assert_eq!(gonality(&grid(3, 3).unwrap(), None).unwrap().gonality, 3);
        assert_eq!(gonality(&chain_of_loops(4).unwrap(), None).unwrap().gonality, 3);
        assert_eq!(gonality(&cycle(5).unwrap(), Some(1)), Err(DivisorError::CapExceeded(1)));
        assert_eq!(gonality(&path(1).unwrap(), None), Err(DivisorError::TooSmall));
    }

    #[test]
    fn equivalence_examples() {
        let c4 = cycle(4).unwrap();
        assert!(equivalent(&c4, &Divisor::point(4, 0, 2), &Divisor::point(4, 2, 2)).unwrap());
        assert!(!equivalent(&c4, &Divisor::point(4, 0, 1), &Divisor::point(4, 1, 1)).unwrap());
        assert!(!equivalent(&c4, &Divisor::point(4, 0, 1), &Divisor::point(4, 1, 2)).unwrap());
        let d = Divisor::from_chips(vec![3, -1, 0, -4]);
        let fired = fire_set(&c4, &d, &vs(4, &[1, 2])).unwrap();
        assert!(equivalent(&c4, &d, &fired).unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(Divisor::from_chips(vec![2, 0, 1]).to_string(), "2*v0 + v2");
        assert_eq!(Divisor::from_chips(vec![0, -1, 3]).to_string(), "-v1 + 3*v2");
        assert_eq!(Divisor::from_chips(vec![1, -2]).to_string(), "v0 - 2*v1");
        assert_eq!(Divisor::zero(2).to_string(), "0");
    }
}

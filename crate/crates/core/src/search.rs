//! Scramble number: a constructive lower bound for any graph, and an
//! exhaustive search for small graphs.

use crate::families::fig2_wheel;
use crate::graph::{Multigraph, ProductShape};
use crate::par;
use crate::scramble::{
    columns_scramble, fig2_scramble, punctured_columns_scramble, rows_scramble, scramble_order,
    singleton_scramble, whole_graph_scramble, OrderCertificate, Scramble, ScrambleError,
};
use crate::vertex_set::VertexSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default cap for [`sn_exact`].
pub const DEFAULT_EXACT_CAP: usize = 6;
/// The exhaustive search indexes connected sets with 128-bit masks.
const EXACT_HARD_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnSearchResult {
    pub value: u64,
    pub best_scramble: Scramble,
    pub certificate: OrderCertificate,
    /// Name of the construction that produced `best_scramble`.
    pub strategy: String,
    /// True only when the value is the exact scramble number.
    pub exhaustive: bool,
}

/// Which constructions [`sn_lower_bound`] tries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnStrategies {
    /// Singleton eggs on classes of pairwise highly edge-connected vertices.
    pub connectivity_classes: bool,
    /// Columns, rows and punctured columns for every product layout the graph fits.
    pub products: bool,
    /// The fixed order-4 scramble when the graph is [`fig2_wheel`].
    pub figures: bool,
    /// Randomized hill climbing over egg edits; `0` disables it.
    pub local_search_steps: usize,
    pub seed: u64,
}

impl Default for SnStrategies {
    fn default() -> Self {
        SnStrategies {
            connectivity_classes: true,
            products: true,
            figures: true,
            local_search_steps: 150,
            seed: 0,
        }
    }
}

struct Candidate {
    name: String,
    scramble: Scramble,
    cert: OrderCertificate,
}

impl Candidate {
    fn new(g: &Multigraph, name: impl Into<String>, scramble: Scramble) -> Self {
        let cert = scramble_order(g, &scramble);
        Candidate { name: name.into(), scramble, cert }
    }
}

/// All-pairs local edge connectivity.
fn pairwise_connectivity(g: &Multigraph) -> Vec<Vec<u64>> {
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let values = par::map(&pairs, |&(a, b)| {
        g.min_cut_between(&VertexSet::singleton(n, a), &VertexSet::singleton(n, b))
            .expect("distinct vertices")
            .value
    });
    let mut lambda = vec![vec![u64::MAX; n]; n];
    for (&(a, b), v) in pairs.iter().zip(values) {
        lambda[a][b] = v;
        lambda[b][a] = v;
    }
    lambda
}

/// For each threshold `k`, vertices with pairwise local edge connectivity at least
/// `k` form equivalence classes; singletons on a class of size `s` have order
/// `min(s, k)`. Returns the best such class as a singleton scramble.
fn connectivity_class_scramble(g: &Multigraph) -> Option<Scramble> {
    let n = g.n();
    let lambda = pairwise_connectivity(g);
    let mut thresholds: Vec<u64> = lambda
        .iter()
        .flatten()
        .copied()
        .filter(|&v| v != u64::MAX)
        .collect();
    thresholds.sort_unstable();
    thresholds.dedup();
    let mut best: Option<(u64, Vec<usize>)> = None;
    for &k in &thresholds {
        let mut assigned = vec![false; n];
        for root in 0..n {
            if assigned[root] {
                continue;
            }
            let class: Vec<usize> = (0..n)
                .filter(|&x| x == root || (!assigned[x] && lambda[root][x] >= k))
                .collect();
            for &x in &class {
                assigned[x] = true;
            }
            let value = (class.len() as u64).min(k);
            if class.len() >= 2 && best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, class));
            }
        }
    }
    best.map(|(_, class)| {
        Scramble::new(g, class.into_iter().map(|v| VertexSet::singleton(n, v)).collect())
            .expect("single vertices are connected")
    })
}

fn portfolio(g: &Multigraph, strategies: &SnStrategies) -> Vec<Candidate> {
    let mut out = vec![
        Candidate::new(g, "whole-graph", whole_graph_scramble(g)),
        Candidate::new(g, "singletons", singleton_scramble(g)),
    ];
    if strategies.connectivity_classes {
        if let Some(s) = connectivity_class_scramble(g) {
            out.push(Candidate::new(g, "connectivity-class", s));
        }
    }
    if strategies.products {
        for shape in ProductShape::detect(g) {
            let tag = format!("{}x{}", shape.left, shape.right);
            if let Ok(s) = columns_scramble(g, shape) {
                out.push(Candidate::new(g, format!("columns[{tag}]"), s));
            }
            if let Ok(s) = rows_scramble(g, shape) {
                out.push(Candidate::new(g, format!("rows[{tag}]"), s));
            }
            if let Ok(s) = punctured_columns_scramble(g, shape) {
                out.push(Candidate::new(g, format!("punctured-columns[{tag}]"), s));
            }
        }
    }
    if strategies.figures && *g == fig2_wheel() {
        out.push(Candidate::new(g, "wheel-pairs", fig2_scramble()));
    }
    out
}

fn neighbourhood(g: &Multigraph, set: &VertexSet) -> Vec<usize> {
    let mut out: Vec<usize> = set
        .iter()
        .flat_map(|u| g.neighbors(u).iter().map(|&(w, _)| w))
        .filter(|&w| !set.contains(w))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// One random edit of the egg list, or `None` if the drawn move does not apply.
fn mutate(g: &Multigraph, eggs: &[VertexSet], rng: &mut ChaCha8Rng) -> Option<Vec<VertexSet>> {
    let n = g.n();
    let mut eggs = eggs.to_vec();
    let i = rng.gen_range(0..eggs.len());
    match rng.gen_range(0..5) {
        // grow an egg by a neighbouring vertex
        0 => {
            let nb = neighbourhood(g, &eggs[i]);
            let &x = nb.choose(rng)?;
            eggs[i].insert(x);
        }
        // shrink an egg, keeping it connected
        1 => {
            if eggs[i].len() < 2 {
                return None;
            }
            let members = eggs[i].to_vec();
            let &x = members.choose(rng)?;
            let mut smaller = eggs[i].clone();
            smaller.remove(x);
            if !g.is_connected_subset(&smaller).ok()? {
                return None;
            }
            eggs[i] = smaller;
        }
        // merge two eggs whose union is connected
        2 => {
            let j = rng.gen_range(0..eggs.len());
            if i == j {
                return None;
            }
            let merged = eggs[i].union(&eggs[j]);
            if !g.is_connected_subset(&merged).ok()? {
                return None;
            }
            eggs[i] = merged;
            eggs.swap_remove(j);
        }
        // add a fresh egg: a vertex or an edge
        3 => {
            let v = rng.gen_range(0..n);
            let mut egg = VertexSet::singleton(n, v);
            if rng.gen_bool(0.5) {
                if let Some(&(w, _)) = g.neighbors(v).choose(rng) {
                    egg.insert(w);
                }
            }
            eggs.push(egg);
        }
        // drop an egg
        _ => {
            if eggs.len() < 2 {
                return None;
            }
            eggs.swap_remove(i);
        }
    }
    Some(eggs)
}

/// Hill climbing from `start`, accepting edits that do not lower the order.
fn local_search(g: &Multigraph, start: &Candidate, steps: usize, seed: u64) -> Candidate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = Candidate {
        name: start.name.clone(),
        scramble: start.scramble.clone(),
        cert: start.cert.clone(),
    };
    let mut best: Option<Candidate> = None;
    for _ in 0..steps {
        let Some(eggs) = mutate(g, current.scramble.eggs(), &mut rng) else {
            continue;
        };
        let Ok(next) = Scramble::new(g, eggs) else {
            continue;
        };
        let cert = scramble_order(g, &next);
        if cert.order >= current.cert.order {
            let improved = cert.order > best.as_ref().map_or(start.cert.order, |b| b.cert.order);
            current = Candidate { name: "local-search".into(), scramble: next, cert };
            if improved {
                best = Some(Candidate {
                    name: "local-search".into(),
                    scramble: current.scramble.clone(),
                    cert: current.cert.clone(),
                });
            }
        }
    }
    best.unwrap_or(current)
}

/// Best scramble order found by a portfolio of constructions plus local search.
/// Always a valid lower bound on the scramble number; never claimed exact.
pub fn sn_lower_bound(g: &Multigraph, strategies: &SnStrategies) -> Result<SnSearchResult, ScrambleError> {
    if g.n() < 2 {
        return Err(ScrambleError::TooSmall);
    }
    let mut candidates = portfolio(g, strategies);
    if strategies.local_search_steps > 0 {
        let start = candidates
            .iter()
            .max_by_key(|c| (c.cert.order, std::cmp::Reverse(c.scramble.len())))
            .expect("portfolio is nonempty");
        let searched = local_search(g, start, strategies.local_search_steps, strategies.seed);
        candidates.push(searched);
    }
    // Earliest candidate wins ties so the reported construction is stable.
    let mut best = candidates.swap_remove(0);
    for c in candidates {
        if c.cert.order > best.cert.order {
            best = c;
        }
    }
    Ok(SnSearchResult {
        value: best.cert.order,
        best_scramble: best.scramble,
        certificate: best.cert,
        strategy: best.name,
        exhaustive: false,
    })
}

/// Tables for the exhaustive search over a graph with at most 7 vertices.
struct ExactTables {
    n: usize,
    /// Connected vertex sets as bitmasks, by size then value.
    sets: Vec<u64>,
    /// `cut[a]` = edges leaving the vertex set `a`.
    cut: Vec<u64>,
    /// `hits[c]` = family mask of connected sets meeting the vertex set `c`.
    hits: Vec<u128>,
    /// `supersets[i]` = family mask of connected sets containing set `i`.
    supersets: Vec<u128>,
}

impl ExactTables {
    fn new(g: &Multigraph) -> Self {
        let n = g.n();
        let full = 1u64 << n;
        let mut sets: Vec<u64> = (1..full)
            .filter(|&m| {
                g.is_connected_subset(&VertexSet::from_mask(n, m))
                    .expect("nonempty")
            })
            .collect();
        sets.sort_by_key(|&m| (m.count_ones(), m));
        let cut = (0..full)
            .map(|m| g.boundary_size(&VertexSet::from_mask(n, m)))
            .collect();
        let hits = (0..full)
            .map(|c| {
                sets.iter()
                    .enumerate()
                    .filter(|&(_, &s)| s & c != 0)
                    .fold(0u128, |f, (i, _)| f | 1 << i)
            })
            .collect();
        let supersets = sets
            .iter()
            .map(|&a| {
                sets.iter()
                    .enumerate()
                    .filter(|&(_, &b)| a & b == a)
                    .fold(0u128, |f, (i, _)| f | 1 << i)
            })
            .collect();
        ExactTables { n, sets, cut, hits, supersets }
    }

    /// Minimum of `cut[a]` over `a ⊇ e` with `a ∩ f = ∅`, straight from the definition.
    fn separation(&self, e: u64, f: u64) -> u64 {
        let free = ((1u64 << self.n) - 1) & !e & !f;
        let mut best = u64::MAX;
        let mut sub = free;
        loop {
            best = best.min(self.cut[(e | sub) as usize]);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        best
    }

    /// `compat[i]` = family mask of sets that may share a scramble with set `i` when
    /// the cut number must be at least `k`.
    fn compatibility(&self, k: u64) -> Vec<u128> {
        par::map(&self.sets, |&a| {
            self.sets
                .iter()
                .enumerate()
                .filter(|&(_, &b)| a & b != 0 || self.separation(a, b) >= k)
                .fold(0u128, |f, (j, _)| f | 1 << j)
        })
    }

    /// Whether no vertex set with fewer than `k` vertices hits all of `family`.
    fn hitting_at_least(&self, family: u128, small_sets: &[u64]) -> bool {
        small_sets.iter().all(|&c| family & !self.hits[c as usize] != 0)
    }
}

/// Depth-first search for a family of pairwise compatible connected sets whose
/// hitting number is at least `k`.
///
/// Adding a set never lowers the hitting number, so `chosen ∪ open` bounds every
/// family reachable from a node. Supersets of a chosen set are dropped from `open`:
/// they are compatible with everything the subset is, and hitting the subset
/// already hits them, so the chosen family stays an inclusion antichain.
fn extend(
    t: &ExactTables,
    compat: &[u128],
    small_sets: &[u64],
    chosen: u128,
    open: u128,
) -> Option<u128> {
    if !t.hitting_at_least(chosen | open, small_sets) {
        return None;
    }
    if open == 0 {
        return Some(chosen);
    }
    let i = open.trailing_zeros() as usize;
    let bit = 1u128 << i;
    let rest = open & !bit;
    let with = extend(t, compat, small_sets, chosen | bit, rest & compat[i] & !t.supersets[i]);
    if with.is_some() {
        return with;
    }
    // A set compatible with every remaining candidate can always be added, so
    // leaving it out cannot help.
    if rest & compat[i] == rest {
        return None;
    }
    extend(t, compat, small_sets, chosen, rest)
}

/// Exact scramble number by exhaustive search, for graphs with at most
/// `vertex_cap` (default 6, never above 7) vertices.
///
/// A scramble has cut number at least `k` exactly when every two disjoint eggs
/// are at least `k` edges apart, so for each `k` the search looks for a family of
/// pairwise compatible connected sets with hitting number at least `k`.
pub fn sn_exact(g: &Multigraph, vertex_cap: Option<usize>) -> Result<SnSearchResult, ScrambleError> {
    let n = g.n();
    let cap = vertex_cap.unwrap_or(DEFAULT_EXACT_CAP).min(EXACT_HARD_CAP);
    if n > cap {
        return Err(ScrambleError::TooLarge { n, cap });
    }
    if n < 2 {
        return Err(ScrambleError::TooSmall);
    }
    let t = ExactTables::new(g);
    let everything: u128 = if t.sets.len() == 128 { u128::MAX } else { (1u128 << t.sets.len()) - 1 };
    let mut best_family = 1u128 << (t.sets.len() - 1); // the whole vertex set: order 1
    for k in 2..=n as u64 {
        let compat = t.compatibility(k);
        let small_sets: Vec<u64> = (0..1u64 << n).filter(|c| c.count_ones() as u64 == k - 1).collect();
        match extend(&t, &compat, &small_sets, 0, everything) {
            Some(family) => best_family = family,
            None => break,
        }
    }
    let eggs = (0..t.sets.len())
        .filter(|&i| best_family >> i & 1 == 1)
        .map(|i| VertexSet::from_mask(n, t.sets[i]))
        .collect();
    let best_scramble = Scramble::new(g, eggs)?;
    let certificate = scramble_order(g, &best_scramble);
    Ok(SnSearchResult {
        value: certificate.order,
        best_scramble,
        certificate,
        strategy: "exhaustive".into(),
        exhaustive: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;

    /// Scramble order straight from the definition: all vertex subsets as hitting
    /// sets and all vertex subsets as separating sides.
    fn brute_order(g: &Multigraph, eggs: &[u64]) -> u64 {
        let n = g.n();
        let full = 1u64 << n;
        let h = (0..full)
            .filter(|&c| eggs.iter().all(|&e| e & c != 0))
            .map(|c| c.count_ones() as u64)
            .min()
            .unwrap();
        let c = (1..full - 1)
            .filter(|&a| {
                eggs.iter().any(|&e| e & !a == 0) && eggs.iter().any(|&e| e & a == 0)
            })
            .map(|a| g.boundary_size(&VertexSet::from_mask(n, a)))
            .min()
            .unwrap_or(u64::MAX);
        h.min(c)
    }

    /// Scramble number over every nonempty family of connected sets.
    fn brute_sn(g: &Multigraph) -> u64 {
        let n = g.n();
        let sets: Vec<u64> = (1..1u64 << n)
            .filter(|&m| g.is_connected_subset(&VertexSet::from_mask(n, m)).unwrap())
            .collect();
        assert!(sets.len() <= 20);
        (1u32..1 << sets.len())
            .map(|f| {
                let eggs: Vec<u64> = (0..sets.len()).filter(|&i| f >> i & 1 == 1).map(|i| sets[i]).collect();
                brute_order(g, &eggs)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn exact_matches_unrestricted_enumeration() {
        let graphs = vec![
            path(2).unwrap(),
            cycle(2).unwrap(),
            path(3).unwrap(),
            cycle(3).unwrap(),
            plied_path(3).unwrap(),
            path(4).unwrap(),
            cycle(4).unwrap(),
            random_tree(4, 1).unwrap(),
            Multigraph::build(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap(),
            Multigraph::build(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 3), (3, 0, 1)]).unwrap(),
            Multigraph::build(3, &[(0, 1, 3), (1, 2, 2)]).unwrap(),
        ];
        for g in graphs {
            let exact = sn_exact(&g, None).unwrap();
            assert_eq!(exact.value, brute_sn(&g), "{g:?}");
            assert!(exact.exhaustive);
        }
    }

    #[test]
    fn exact_small_examples() {
        assert_eq!(sn_exact(&Multigraph::build(2, &[(0, 1, 3)]).unwrap(), None).unwrap().value, 2);
        assert_eq!(sn_exact(&cycle(4).unwrap(), None).unwrap().value, 2);
        for seed in 0..5 {
            assert_eq!(sn_exact(&random_tree(6, seed).unwrap(), None).unwrap().value, 1);
        }
        assert!(matches!(sn_exact(&path(7).unwrap(), None), Err(ScrambleError::TooLarge { .. })));
        assert!(matches!(sn_exact(&path(1).unwrap(), None), Err(ScrambleError::TooSmall)));
    }

    #[test]
    fn lower_bound_examples() {
        let g = plied_path(3).unwrap();
        assert_eq!(sn_lower_bound(&g, &SnStrategies::default()).unwrap().value, 3);
        let g = stacked_prism(4, 2).unwrap();
        assert_eq!(sn_lower_bound(&g, &SnStrategies::default()).unwrap().value, 4);
        let g = torus(3, 3).unwrap();
        assert_eq!(sn_lower_bound(&g, &SnStrategies::default()).unwrap().value, 6);
        let g = fig2_wheel();
        assert_eq!(sn_lower_bound(&g, &SnStrategies::default()).unwrap().value, 4);
    }

    #[test]
    fn lower_bound_is_deterministic() {
        let g = random_connected_multigraph(7, 0.5, 2, 9).unwrap();
        let a = sn_lower_bound(&g, &SnStrategies::default()).unwrap();
        let b = sn_lower_bound(&g, &SnStrategies::default()).unwrap();
        assert_eq!(a, b);
    }
}

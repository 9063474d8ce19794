//! Generators for the named graph families, a few fixed example graphs, and
//! seeded random instances.

use crate::graph::{cartesian_product, GraphError, Multigraph, ProductShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParam(msg.into())
}

pub fn path(n: usize) -> Result<Multigraph, FamilyError> {
    if n < 1 {
        return Err(bad("path needs at least 1 vertex"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
    Ok(Multigraph::build(n, &edges)?)
}

/// Cycle on `n` vertices; `cycle(2)` is the two-edge bundle.
pub fn cycle(n: usize) -> Result<Multigraph, FamilyError> {
    if n < 2 {
        return Err(bad("cycle needs at least 2 vertices"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
    Ok(Multigraph::build(n, &edges)?)
}

/// Uniform labelled tree on `n` vertices, decoded from a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Result<Multigraph, FamilyError> {
    if n < 1 {
        return Err(bad("tree needs at least 1 vertex"));
    }
    if n <= 2 {
        return path(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("Prüfer decoding always has a leaf");
        edges.push((leaf, c, 1));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1], 1));
    Ok(Multigraph::build(n, &edges)?)
}

/// `P_m □ P_n`.
pub fn grid(m: usize, n: usize) -> Result<Multigraph, FamilyError> {
    if m < 1 || n < 1 {
        return Err(bad("grid needs m, n >= 1"));
    }
    Ok(cartesian_product(&path(m)?, &path(n)?))
}

/// `C_m □ P_n`; columns are indexed by the cycle.
pub fn stacked_prism(m: usize, n: usize) -> Result<Multigraph, FamilyError> {
    if m < 2 || n < 1 {
        return Err(bad("stacked prism needs m >= 2, n >= 1"));
    }
    Ok(cartesian_product(&cycle(m)?, &path(n)?))
}

/// `C_m □ C_n`.
pub fn torus(m: usize, n: usize) -> Result<Multigraph, FamilyError> {
    if m < 2 || n < 2 {
        return Err(bad("torus needs m, n >= 2"));
    }
    Ok(cartesian_product(&cycle(m)?, &cycle(n)?))
}

/// Path on `k` vertices with every edge replaced by `k` parallel edges.
pub fn plied_path(k: usize) -> Result<Multigraph, FamilyError> {
    if k < 2 {
        return Err(bad("plied path needs k >= 2"));
    }
    let factor = u32::try_from(k).map_err(|_| bad("ply factor too large"))?;
    Ok(path(k)?.ply(factor)?)
}

/// Doubled path on `k` vertices where one copy of each doubled edge is subdivided
/// `k - 1` times, giving `k - 1` loops of length `k + 1`.
///
/// Base path vertices keep ids `0..k`; the subdivision vertices of loop `i` follow
/// in order, walking from vertex `i` towards `i + 1`.
pub fn chain_of_loops(k: usize) -> Result<Multigraph, FamilyError> {
    if k < 2 {
        return Err(bad("chain of loops needs k >= 2"));
    }
    let mut g = path(k)?.ply(2)?;
    for i in 0..k - 1 {
        let mut tail = i;
        for _ in 0..k - 1 {
            g = g.subdivide_edge(tail, i + 1)?;
            tail = g.n() - 1;
        }
    }
    Ok(g)
}

/// Marked vertex `v` of [`fig1_graph`]; `3v` has positive rank.
pub const FIG1_MARKED_VERTEX: usize = 0;
/// Marked edge `e` of [`fig1_graph`]; contracting it yields [`fig2_wheel`].
pub const FIG1_MARKED_EDGE: (usize, usize) = (2, 5);

/// An 8-vertex, 13-edge graph with gonality and treewidth 3 whose edge
/// contraction [`FIG1_MARKED_EDGE`] has a scramble of order 4.
///
/// Ids follow planar layout coordinates:
/// 0 = (0,1) marked v, 1 = (1,0), 2 = (1,1), 3 = (1,2),
/// 4 = (2,0), 5 = (2,1), 6 = (2,2), 7 = (3,1).
pub fn fig1_graph() -> Multigraph {
    let edges = [
        (0, 1, 1), // (0,1)-(1,0)
        (0, 2, 1), // (0,1)-(1,1)
        (0, 3, 1), // (0,1)-(1,2)
        (1, 2, 1), // (1,0)-(1,1)
        (1, 4, 1), // (1,0)-(2,0)
        (2, 3, 1), // (1,1)-(1,2)
        (2, 5, 1), // (1,1)-(2,1), edge e
        (3, 6, 1), // (1,2)-(2,2)
        (4, 5, 1), // (2,0)-(2,1)
        (4, 7, 1), // (2,0)-(3,1)
        (5, 6, 1), // (2,1)-(2,2)
        (5, 7, 1), // (2,1)-(3,1)
        (6, 7, 1), // (2,2)-(3,1)
    ];
    Multigraph::build(8, &edges).expect("edge list is connected")
}

/// Hub of [`fig2_wheel`].
pub const FIG2_HUB: usize = 2;

/// Wheel with six rim vertices around hub 2.
///
/// Ids are those produced by contracting [`FIG1_MARKED_EDGE`] in [`fig1_graph`]:
/// 0 = (0,1) Y, 1 = (1,0) B, 2 = hub R, 3 = (1,2) Y, 4 = (2,0) B, 5 = (2,2) G, 6 = (3,1) G.
pub fn fig2_wheel() -> Multigraph {
    let edges = [
        // rim
        (0, 1, 1),
        (1, 4, 1),
        (4, 6, 1),
        (6, 5, 1),
        (5, 3, 1),
        (3, 0, 1),
        // spokes
        (2, 0, 1),
        (2, 1, 1),
        (2, 3, 1),
        (2, 4, 1),
        (2, 5, 1),
        (2, 6, 1),
    ];
    Multigraph::build(7, &edges).expect("wheel is connected")
}

/// Eggs of an order-4 scramble on [`fig2_wheel`]: three adjacent rim pairs and the hub.
pub const FIG2_EGGS: [&[usize]; 4] = [&[0, 3], &[1, 4], &[5, 6], &[FIG2_HUB]];

/// Two triangles joined by two disjoint edges; gonality 2.
///
/// 0 = (0,1), 1 = (1,0), 2 = (1,2), 3 = (2,0), 4 = (2,2), 5 = (3,1).
pub fn fig4_left() -> Multigraph {
    let edges = [
        (0, 1, 1),
        (0, 2, 1),
        (1, 2, 1), // drawn through (1,1)
        (1, 3, 1), // bottom connecting edge
        (2, 4, 1), // top connecting edge
        (3, 4, 1), // drawn through (2,1)
        (3, 5, 1),
        (4, 5, 1),
    ];
    Multigraph::build(6, &edges).expect("edge list is connected")
}

/// The bottom connecting edge of [`fig4_left`], subdivided in [`fig4_right`].
pub const FIG4_SUBDIVIDED_EDGE: (usize, usize) = (1, 3);

/// [`fig4_left`] with its bottom connecting edge subdivided once (new vertex 6);
/// gonality 3 although the scramble number stays 2.
pub fn fig4_right() -> Multigraph {
    let (u, v) = FIG4_SUBDIVIDED_EDGE;
    fig4_left().subdivide_edge(u, v).expect("edge exists")
}

/// Erdős–Rényi skeleton with uniform multiplicities in `1..=max_mult`, resampled
/// until connected.
pub fn random_connected_multigraph(
    n: usize,
    edge_prob: f64,
    max_mult: u32,
    seed: u64,
) -> Result<Multigraph, FamilyError> {
    if n < 2 {
        return Err(bad("random multigraph needs n >= 2"));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(bad("edge probability must be in (0, 1]"));
    }
    if max_mult < 1 {
        return Err(bad("max multiplicity must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(edge_prob) {
                    edges.push((u, v, rng.gen_range(1..=max_mult)));
                }
            }
        }
        match Multigraph::build(n, &edges) {
            Ok(g) => return Ok(g),
            Err(GraphError::Disconnected) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

/// A named family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    RandomTree { n: usize, seed: u64 },
    Grid(usize, usize),
    StackedPrism(usize, usize),
    Torus(usize, usize),
    PliedPath(usize),
    ChainOfLoops(usize),
    Fig1,
    Fig2,
    Fig4Left,
    Fig4Right,
    Random { n: usize, edge_prob: f64, max_mult: u32, seed: u64 },
}

impl FamilySpec {
    pub const NAMES: &'static [&'static str] = &[
        "path",
        "cycle",
        "tree",
        "grid",
        "prism",
        "torus",
        "plied-path",
        "chain-of-loops",
        "fig1",
        "fig2",
        "fig4-left",
        "fig4-right",
        "random",
    ];

    /// Parses a family name and its positional parameters. `seed` feeds the
    /// random families and is ignored by the others.
    pub fn parse(name: &str, params: &[String], seed: u64) -> Result<Self, FamilyError> {
        fn int<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, FamilyError> {
            params
                .get(i)
                .ok_or_else(|| bad(format!("missing parameter `{what}`")))?
                .parse()
                .map_err(|_| bad(format!("parameter `{what}` is not a valid number")))
        }
        let arity = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(bad(format!("`{name}` takes {k} parameter(s), got {}", params.len())))
            }
        };
        let spec = match name {
            "path" => {
                arity(1)?;
                FamilySpec::Path(int(params, 0, "n")?)
            }
            "cycle" => {
                arity(1)?;
                FamilySpec::Cycle(int(params, 0, "n")?)
            }
            "tree" => {
                arity(1)?;
                FamilySpec::RandomTree { n: int(params, 0, "n")?, seed }
            }
            "grid" => {
                arity(2)?;
                FamilySpec::Grid(int(params, 0, "m")?, int(params, 1, "n")?)
            }
            "prism" => {
                arity(2)?;
                FamilySpec::StackedPrism(int(params, 0, "m")?, int(params, 1, "n")?)
            }
            "torus" => {
                arity(2)?;
                FamilySpec::Torus(int(params, 0, "m")?, int(params, 1, "n")?)
            }
            "plied-path" => {
                arity(1)?;
                FamilySpec::PliedPath(int(params, 0, "k")?)
            }
            "chain-of-loops" => {
                arity(1)?;
                FamilySpec::ChainOfLoops(int(params, 0, "k")?)
            }
            "fig1" => {
                arity(0)?;
                FamilySpec::Fig1
            }
            "fig2" => {
                arity(0)?;
                FamilySpec::Fig2
            }
            "fig4-left" => {
                arity(0)?;
                FamilySpec::Fig4Left
            }
            "fig4-right" => {
                arity(0)?;
                FamilySpec::Fig4Right
            }
            "random" => {
                arity(3)?;
                FamilySpec::Random {
                    n: int(params, 0, "n")?,
                    edge_prob: int(params, 1, "edge_prob")?,
                    max_mult: int(params, 2, "max_mult")?,
                    seed,
                }
            }
            other => return Err(FamilyError::UnknownFamily(other.to_string())),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<Multigraph, FamilyError> {
        match *self {
            FamilySpec::Path(n) => path(n),
            FamilySpec::Cycle(n) => cycle(n),
            FamilySpec::RandomTree { n, seed } => random_tree(n, seed),
            FamilySpec::Grid(m, n) => grid(m, n),
            FamilySpec::StackedPrism(m, n) => stacked_prism(m, n),
            FamilySpec::Torus(m, n) => torus(m, n),
            FamilySpec::PliedPath(k) => plied_path(k),
            FamilySpec::ChainOfLoops(k) => chain_of_loops(k),
            FamilySpec::Fig1 => Ok(fig1_graph()),
            FamilySpec::Fig2 => Ok(fig2_wheel()),
            FamilySpec::Fig4Left => Ok(fig4_left()),
            FamilySpec::Fig4Right => Ok(fig4_right()),
            FamilySpec::Random { n, edge_prob, max_mult, seed } => {
                random_connected_multigraph(n, edge_prob, max_mult, seed)
            }
        }
    }

    /// Product layout of the generated graph, for the product families.
    pub fn product_shape(&self) -> Option<ProductShape> {
        match *self {
            FamilySpec::Grid(m, n) | FamilySpec::StackedPrism(m, n) | FamilySpec::Torus(m, n) => {
                Some(ProductShape::new(m, n))
            }
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Path(n) => write!(f, "path({n})"),
            FamilySpec::Cycle(n) => write!(f, "cycle({n})"),
            FamilySpec::RandomTree { n, seed } => write!(f, "tree({n},seed={seed})"),
            FamilySpec::Grid(m, n) => write!(f, "grid({m},{n})"),
            FamilySpec::StackedPrism(m, n) => write!(f, "prism({m},{n})"),
            FamilySpec::Torus(m, n) => write!(f, "torus({m},{n})"),
            FamilySpec::PliedPath(k) => write!(f, "plied-path({k})"),
            FamilySpec::ChainOfLoops(k) => write!(f, "chain-of-loops({k})"),
            FamilySpec::Fig1 => f.write_str("fig1"),
            FamilySpec::Fig2 => f.write_str("fig2"),
            FamilySpec::Fig4Left => f.write_str("fig4-left"),
            FamilySpec::Fig4Right => f.write_str("fig4-right"),
            FamilySpec::Random { n, edge_prob, max_mult, seed } => {
                write!(f, "random({n},{edge_prob},{max_mult},seed={seed})")
            }
        }
    }
}

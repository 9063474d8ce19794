//! Combined invariant report for one graph, with the `tw ≤ sn ≤ gon` check.

use crate::divisor::{gonality, has_positive_rank, DivisorError, GonalityResult};
use crate::graph::Multigraph;
use crate::io::write_graph;
use crate::scramble::{CertificateError, ScrambleError};
use crate::search::{sn_exact, sn_lower_bound, SnSearchResult, SnStrategies, DEFAULT_EXACT_CAP};
use crate::treewidth::{treewidth, width_of_order, TreewidthError, TreewidthResult, DEFAULT_VERTEX_CAP};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("invariants need a graph with at least two vertices")]
    TooSmall,
    #[error(transparent)]
    Treewidth(#[from] TreewidthError),
    #[error(transparent)]
    Scramble(#[from] ScrambleError),
    #[error(transparent)]
    Gonality(#[from] DivisorError),
    #[error("certificate failed re-verification: {0}")]
    Certificate(String),
}

impl ReportError {
    /// True when the failure is a configured size or degree cap being exceeded.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            ReportError::Treewidth(TreewidthError::TooLarge { .. })
                | ReportError::Scramble(ScrambleError::TooLarge { .. })
                | ReportError::Gonality(DivisorError::CapExceeded(_))
        )
    }
}

impl From<CertificateError> for ReportError {
    fn from(e: CertificateError) -> Self {
        ReportError::Certificate(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub treewidth: bool,
    pub gonality: bool,
    pub sn_lower: bool,
    pub sn_exact: bool,
    pub treewidth_cap: usize,
    pub sn_exact_cap: usize,
    pub gonality_cap: Option<u64>,
    pub strategies: SnStrategies,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            treewidth: true,
            gonality: true,
            sn_lower: true,
            sn_exact: false,
            treewidth_cap: DEFAULT_VERTEX_CAP,
            sn_exact_cap: DEFAULT_EXACT_CAP,
            gonality_cap: None,
            strategies: SnStrategies::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    /// FNV-1a hash of the canonical text form.
    pub graph_hash: u64,
    pub n: usize,
    pub edge_count: u64,
    pub treewidth: Option<TreewidthResult>,
    pub sn_lower: Option<SnSearchResult>,
    pub sn_exact: Option<SnSearchResult>,
    pub gonality: Option<GonalityResult>,
    pub sandwich_ok: bool,
    pub timings: Vec<(&'static str, Duration)>,
}

pub fn graph_hash(g: &Multigraph) -> u64 {
    write_graph(g).bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Checks `tw ≤ sn_lower ≤ gon`, and with an exact value also
/// `tw ≤ sn_exact ≤ gon` and `sn_lower ≤ sn_exact`. Missing values impose nothing.
pub fn sandwich_holds(tw: Option<u64>, sn_lower: Option<u64>, sn_exact: Option<u64>, gon: Option<u64>) -> bool {
    let chain = [tw, sn_lower, sn_exact, gon];
    chain.iter().enumerate().all(|(i, a)| {
        chain[i + 1..].iter().all(|b| match (a, b) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        })
    })
}

fn timed<T>(timings: &mut Vec<(&'static str, Duration)>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage, start.elapsed()));
    out
}

fn check_search(g: &Multigraph, r: &SnSearchResult) -> Result<(), ReportError> {
    r.certificate.verify(g, &r.best_scramble)?;
    if r.certificate.order != r.value {
        return Err(ReportError::Certificate("reported value differs from certified order".into()));
    }
    Ok(())
}

/// Computes the requested invariants and re-verifies every certificate.
pub fn compute_report(g: &Multigraph, opts: &ReportOptions) -> Result<InvariantReport, ReportError> {
    if g.n() < 2 {
        return Err(ReportError::TooSmall);
    }
    let mut timings = Vec::new();
    let tw = if opts.treewidth {
        let r = timed(&mut timings, "treewidth", || treewidth(g, Some(opts.treewidth_cap)))?;
        if width_of_order(g, &r.elimination_order)? != r.width {
            return Err(ReportError::Certificate("elimination order does not reproduce the width".into()));
        }
        Some(r)
    } else {
        None
    };
    let lower = if opts.sn_lower {
        let r = timed(&mut timings, "sn-lower", || sn_lower_bound(g, &opts.strategies))?;
        check_search(g, &r)?;
        Some(r)
    } else {
        None
    };
    let exact = if opts.sn_exact {
        let r = timed(&mut timings, "sn-exact", || sn_exact(g, Some(opts.sn_exact_cap)))?;
        check_search(g, &r)?;
        Some(r)
    } else {
        None
    };
    let gon = if opts.gonality {
        let r = timed(&mut timings, "gonality", || gonality(g, opts.gonality_cap))?;
        if r.witness.degree() as u64 != r.gonality || !has_positive_rank(g, &r.witness)? {
            return Err(ReportError::Certificate("gonality witness does not have positive rank".into()));
        }
        Some(r)
    } else {
        None
    };
    let sandwich_ok = sandwich_holds(
        tw.as_ref().map(|r| r.width as u64),
        lower.as_ref().map(|r| r.value),
        exact.as_ref().map(|r| r.value),
        gon.as_ref().map(|r| r.gonality),
    );
    Ok(InvariantReport {
        graph_hash: graph_hash(g),
        n: g.n(),
        edge_count: g.edge_count(),
        treewidth: tw,
        sn_lower: lower,
        sn_exact: exact,
        gonality: gon,
        sandwich_ok,
        timings,
    })
}

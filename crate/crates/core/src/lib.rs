//! Scramble number, gonality and treewidth of loopless multigraphs.
//!
//! Every invariant comes with a checkable witness: an elimination order for
//! treewidth, a scramble with an order certificate for scramble number, and a
//! positive-rank divisor for gonality.
//!
//! ```
//! use scramblekit::{families, gonality, scramble_order, treewidth};
//!
//! let g = families::stacked_prism(4, 2).unwrap();
//! let shape = scramblekit::ProductShape::new(4, 2);
//! let s = scramblekit::columns_scramble(&g, shape).unwrap();
//! assert_eq!(treewidth(&g, None).unwrap().width, 3);
//! assert_eq!(scramble_order(&g, &s).order, 4);
//! assert_eq!(gonality(&g, None).unwrap().gonality, 4);
//! ```
//!
//! With the default `parallel` feature the heavy searches run on rayon's global
//! pool; without it everything runs sequentially with identical results.

pub mod divisor;
pub mod families;
mod flow;
pub mod graph;
pub mod io;
mod par;
pub mod report;
pub mod scramble;
pub mod search;
pub mod treewidth;
pub mod vertex_set;

pub use divisor::{
    equivalent, fire_set, gonality, has_positive_rank, is_reduced, reduce, Divisor, DivisorError,
    FiringScript, FiringStep, GonalityResult,
};
pub use graph::{cartesian_product, CutResult, GraphError, Multigraph, ProductShape};
pub use par::is_parallel;
pub use report::{compute_report, sandwich_holds, InvariantReport, ReportError, ReportOptions};
pub use scramble::{
    columns_scramble, cut_number, hitting_number, punctured_columns_scramble, rows_scramble,
    scramble_order, singleton_scramble, CutBound, CutWitness, OrderCertificate, Scramble,
    ScrambleError,
};
pub use search::{sn_exact, sn_lower_bound, SnSearchResult, SnStrategies};
pub use treewidth::{treewidth, width_of_order, TreewidthError, TreewidthResult};
pub use vertex_set::VertexSet;

//! Weak greedy selection of approximation subspaces in sequence spaces,
//! Kolmogorov width estimates, and executable greedy-versus-width inequalities.

pub mod approx;
pub mod bounds;
pub mod error;
pub mod export;
pub mod greedy;
pub mod lp;
pub mod rng;
pub mod seqspace;
pub mod sets;
pub mod widths;

pub use approx::{ApproxResult, SolverOptions, Subspace};
pub use error::{Error, Result};
pub use greedy::{run_weak_greedy, GreedyTrace, Path, Policy, WeakGreedyParams};
pub use seqspace::{DenseVector, Functional, NormKind};
pub use sets::{realize, CompactSet, CompactSetSpec};
pub use widths::{assemble_widths, WidthMethod, WidthSequence, WidthTag};
pub use bounds::{BoundReport, Corollary, RateParams, Verdict};

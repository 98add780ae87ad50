//! Multicast loss tomography over tree topologies.
//!
//! The crate simulates i.i.d. Bernoulli probe losses over a rooted
//! multicast tree, derives the sufficient statistics observable at the
//! receivers, and estimates per-path and per-link pass rates with four
//! estimator families:
//!
//! - `minc-mle`: the likelihood-polynomial root found numerically by
//!   bisection,
//! - `merged-mle`: the closed form obtained by merging the children into
//!   two groups,
//! - `lln`: the law-of-large-numbers explicit estimator using the
//!   all-children intersection rate,
//! - `order-r:<r>`: the family averaging subset-wise closed forms over all
//!   r-subsets of a node's children.
//!
//! A grid-search likelihood oracle validates the solver on small
//! instances, and a Monte Carlo harness compares finite-sample accuracy
//! (bias, variance, RMSE, convergence slope) across estimators.
//!
//! ```
//! use losstomo::estimators::{estimate_all_paths, EstimatorId};
//! use losstomo::simulator::simulate_probes;
//! use losstomo::stats::project_indicators;
//! use losstomo::topology::Tree;
//!
//! let tree = Tree::parse("link 1 0 0.95\nlink 2 1 0.9\nlink 3 1 0.9").unwrap();
//! let obs = simulate_probes(&tree, 1000, 42).unwrap();
//! let ind = project_indicators(&tree, &obs).unwrap();
//! let set = estimate_all_paths(&tree, &ind, &EstimatorId::MincMle, false);
//! let a1 = set.path(1).a_hat.unwrap();
//! assert!(a1 > 0.8 && a1 <= 1.0);
//! ```
//!
//! See the `examples/` directory for one runnable program per capability
//! and the `losstomo` binary for the file-based workflow.

pub mod bits;
pub mod cli;
pub mod estimators;
mod fmtnum;
pub mod harness;
pub mod oracle;
pub mod simulator;
pub mod stats;
pub mod topology;

pub use estimators::{EstimateSet, EstimatorId, Flags, PathEstimate, SplitPolicy};
pub use harness::{ExperimentConfig, SummaryRow};
pub use simulator::{ObservationMatrix, SplitMix64};
pub use stats::NodeIndicators;
pub use topology::{NodeId, Tree};

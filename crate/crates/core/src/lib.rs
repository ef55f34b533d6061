//! Performance-preserving downscaled replicas of weighted complex networks.
//!
//! A replica of `N' = alpha * N` nodes is built from a network whose links
//! carry capacities and propagation delays so that the joint distribution of
//! `(k, k', C, P)` over links survives the size change. Multiplying the
//! replica's capacities by `alpha` and dividing delays and protocol timeouts by
//! `alpha` then preserves the distributions of `alpha`-normalized flow
//! completion times and packet delays. The crate contains every stage needed
//! to build and check such replicas:
//!
//! * [`topology`]: weighted graph model and edge-list I/O
//! * [`distfit`]: smoothing-spline marginals and inverse-transform sampling
//! * [`rescaler`]: the rank-matching replica construction
//! * [`rewirer`]: `p(k,k')`-preserving clustering-targeting rewiring
//! * [`metrics`]: structural and weighted-correlation statistics
//! * [`scenario`]: capacity/delay assignment, the alpha transform, traffic
//! * [`simulator`]: deterministic packet-level discrete-event simulator
//! * [`analysis`]: normalized CCDFs and two-sample comparisons
//! * [`cli`]: seeded, manifest-driven pipelines behind the `netrescale` binary
//!
//! See the `examples/` directory for one runnable program per stage.

pub mod analysis;
pub mod cli;
pub mod distfit;
pub mod error;
pub mod metrics;
pub mod rescaler;
pub mod rewirer;
pub mod scenario;
pub mod seed;
pub mod simulator;
pub mod synth;
pub mod textio;
pub mod topology;

pub use error::{Error, Result};
pub use topology::{LinkAttrs, LinkVector, NodeId, Topology};

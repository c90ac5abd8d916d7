//! Modularity maximization with optimality guarantees.
//!
//! - [`graph`]: simple undirected graphs, partitions and exact modularity.
//! - [`exact`]: branch-and-bound with proven bounds, optimum enumeration,
//!   and a brute-force oracle.
//! - [`heuristics`]: CNM, Louvain, Leiden and Combo.
//! - [`metrics`]: GOP, AMI, RMI and ECS, and the max-over-optima protocol.
//! - [`benchgen`]: seeded planted-partition benchmark graphs.
//!
//! ```
//! use modmax::exact::{branch_and_bound_max, SolveConfig};
//! use modmax::graph::{Graph, ModularityParams};
//!
//! let g = Graph::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
//! let r = branch_and_bound_max(&g, &ModularityParams::default(), &SolveConfig::exact()).unwrap();
//! assert!(r.proven_optimal);
//! assert_eq!(r.q_lb_f64(), 0.5);
//! ```

pub mod benchgen;
pub mod error;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod metrics;

pub use error::{Error, Result};

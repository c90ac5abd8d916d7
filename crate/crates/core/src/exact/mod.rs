//! Provably optimal and gap-bounded modularity maximization.
//!
//! [`branch_and_bound_max`] searches over must-link / cannot-link decisions
//! on node pairs, which is the same feasible set as the clique-partitioning
//! integer program with triangle constraints: transitivity is enforced by
//! the class structure rather than by explicit constraints. The search is
//! seeded with the better of Louvain and Combo. With `tolerance = 0` it
//! proves optimality; with a positive tolerance it stops once the remaining
//! gap is within bounds. [`brute_force_max`] is an independent exhaustive
//! oracle for small graphs.

mod brute;
mod search;
mod state;

pub use brute::{brute_force_max, brute_force_max_with_limit, BRUTE_FORCE_LIMIT};
pub use state::{upper_bound, PairDecisionState, PairStatus};

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ratio_to_f64, Graph, ModularityMatrix, ModularityParams, Partition};
use crate::heuristics::{combo, louvain, HeuristicConfig};

/// Incumbents at or below this modularity use an absolute gap.
pub const GAP_FLOOR: f64 = 1e-12;

/// Exact-solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Relative gap at which the search may stop; 0 proves optimality.
    pub tolerance: f64,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Collect every optimal partition instead of one.
    pub enumerate_all: bool,
    /// Seed for the warm-start heuristics.
    pub seed: u64,
    /// Seed the incumbent with Louvain and Combo before searching.
    pub warm_start: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tolerance: 0.0,
            time_limit: None,
            node_limit: None,
            enumerate_all: false,
            seed: 0,
            warm_start: true,
        }
    }
}

impl SolveConfig {
    /// Optimality-proving configuration.
    pub fn exact() -> Self {
        SolveConfig::default()
    }

    /// Configuration that collects every optimal partition.
    pub fn enumerate() -> Self {
        SolveConfig {
            enumerate_all: true,
            ..SolveConfig::default()
        }
    }

    /// Approximate configuration stopping at relative gap `tolerance`.
    pub fn approximate(tolerance: f64) -> Self {
        SolveConfig {
            tolerance,
            ..SolveConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.tolerance) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must lie in [0, 1), got {}",
                self.tolerance
            )));
        }
        if self.enumerate_all && self.tolerance != 0.0 {
            return Err(Error::InvalidConfig(
                "enumerating all optima requires tolerance 0".into(),
            ));
        }
        Ok(())
    }
}

/// Why the search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Optimal,
    WithinTolerance,
    TimeLimit,
    NodeLimit,
}

impl Termination {
    /// True when a time or node limit cut the search short.
    pub fn hit_limit(self) -> bool {
        matches!(self, Termination::TimeLimit | Termination::NodeLimit)
    }
}

/// Outcome of an exact or approximate solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Best partitions found, canonical and sorted. All of them when
    /// enumerating and `enumeration_complete` is set.
    pub optima: Vec<Partition>,
    /// Modularity of the incumbent.
    pub q_lb: Ratio<i64>,
    /// Proven upper bound on the maximum modularity.
    pub q_ub: Ratio<i64>,
    pub gap: f64,
    pub proven_optimal: bool,
    pub enumeration_complete: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub termination: Termination,
}

impl SolveResult {
    pub fn q_lb_f64(&self) -> f64 {
        ratio_to_f64(self.q_lb)
    }

    pub fn q_ub_f64(&self) -> f64 {
        ratio_to_f64(self.q_ub)
    }

    /// Serializable view: floats plus exact `num/den` strings.
    pub fn to_report(&self) -> SolveReport {
        SolveReport {
            schema_version: "1",
            q_lb: self.q_lb_f64(),
            q_ub: self.q_ub_f64(),
            q_lb_exact: self.q_lb.to_string(),
            q_ub_exact: self.q_ub.to_string(),
            gap: self.gap,
            proven_optimal: self.proven_optimal,
            enumeration_complete: self.enumeration_complete,
            nodes_explored: self.nodes_explored,
            elapsed_seconds: self.elapsed.as_secs_f64(),
            termination: self.termination,
            optima: self.optima.iter().map(|x| x.labels().to_vec()).collect(),
        }
    }
}

/// JSON shape of a [`SolveResult`].
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: &'static str,
    pub q_lb: f64,
    pub q_ub: f64,
    pub q_lb_exact: String,
    pub q_ub_exact: String,
    pub gap: f64,
    pub proven_optimal: bool,
    pub enumeration_complete: bool,
    pub nodes_explored: u64,
    pub elapsed_seconds: f64,
    pub termination: Termination,
    pub optima: Vec<Vec<usize>>,
}

/// `(q_ub - q_lb) / q_lb`, or the absolute difference once `q_lb` is at or
/// below [`GAP_FLOOR`].
pub fn gap(q_lb: Ratio<i64>, q_ub: Ratio<i64>) -> f64 {
    let diff = ratio_to_f64(q_ub - q_lb);
    let lb = ratio_to_f64(q_lb);
    if lb > GAP_FLOOR {
        diff / lb
    } else {
        diff
    }
}

/// Branch-and-bound modularity maximization.
///
/// Limits never raise errors: the result reports the bounds reached with
/// `proven_optimal = false`.
pub fn branch_and_bound_max(g: &Graph, p: &ModularityParams, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let start = Instant::now();
    let matrix = ModularityMatrix::new(g, p)?;
    let incumbent = initial_incumbent(g, p, cfg, &matrix)?;
    Ok(search::Search::new(&matrix, cfg, incumbent).run(start))
}

/// Every partition attaining the maximum modularity.
///
/// Ties are never pruned. If a limit stops the search first, the result has
/// `enumeration_complete = false`.
pub fn enumerate_optima(g: &Graph, p: &ModularityParams, cfg: &SolveConfig) -> Result<SolveResult> {
    if cfg.tolerance != 0.0 {
        return Err(Error::InvalidConfig(
            "enumerating all optima requires tolerance 0".into(),
        ));
    }
    let cfg = SolveConfig {
        enumerate_all: true,
        ..cfg.clone()
    };
    branch_and_bound_max(g, p, &cfg)
}

fn initial_incumbent(
    g: &Graph,
    p: &ModularityParams,
    cfg: &SolveConfig,
    matrix: &ModularityMatrix,
) -> Result<(i64, Partition)> {
    let n = g.n();
    let mut candidates = vec![Partition::all_in_one(n), Partition::singletons(n)];
    if cfg.warm_start {
        let hc = HeuristicConfig {
            seed: cfg.seed,
            gamma: *p,
            ..HeuristicConfig::default()
        };
        candidates.push(louvain(g, &hc)?);
        candidates.push(combo(g, &hc)?);
    }
    let best = candidates
        .into_iter()
        .map(|x| (matrix.objective(&x), x))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .expect("candidates are non-empty");
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SolveConfig::approximate(1.0).validate().is_err());
        assert!(SolveConfig::approximate(-0.1).validate().is_err());
        let bad = SolveConfig {
            tolerance: 0.1,
            enumerate_all: true,
            ..SolveConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SolveConfig::approximate(0.9).validate().is_ok());
    }

    #[test]
    fn two_triangles_exact() {
        let p = ModularityParams::default();
        let r = branch_and_bound_max(&two_triangles(), &p, &SolveConfig::exact()).unwrap();
        assert!(r.proven_optimal);
        assert_eq!(r.q_lb, Ratio::new(1, 2));
        assert_eq!(r.q_ub, r.q_lb);
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.optima, brute_force_max(&two_triangles(), &p).unwrap().optima);
    }

    #[test]
    fn c4_has_two_optima() {
        let p = ModularityParams::default();
        let oracle = brute_force_max(&c4(), &p).unwrap();
        // all-in-one and both pairings tie at Q = 0
        assert_eq!(oracle.optima.len(), 3);
        assert_eq!(oracle.q_lb, Ratio::new(0, 1));
        let r = enumerate_optima(&c4(), &p, &SolveConfig::exact()).unwrap();
        assert!(r.enumeration_complete);
        assert_eq!(r.optima, oracle.optima);
        assert_eq!(r.q_lb, oracle.q_lb);
    }

    #[test]
    fn approximate_gap_contract() {
        let p = ModularityParams::default();
        let r = branch_and_bound_max(&two_triangles(), &p, &SolveConfig::approximate(0.9)).unwrap();
        assert!(r.gap <= 0.9);
        assert!(r.q_lb <= r.q_ub);
        assert!(r.q_lb_f64() >= r.q_ub_f64() / 1.9 - 1e-12);
    }

    #[test]
    fn node_limit_reports_without_error() {
        let g = Graph::parse_edge_list(include_str!("../../tests/data/karate.txt")).unwrap();
        let cfg = SolveConfig {
            node_limit: Some(3),
            warm_start: false,
            ..SolveConfig::default()
        };
        let r = branch_and_bound_max(&g, &ModularityParams::default(), &cfg).unwrap();
        assert_eq!(r.termination, Termination::NodeLimit);
        assert!(!r.proven_optimal);
        assert!(r.q_lb < r.q_ub);
        assert!(r.gap > 0.0);
    }

    #[test]
    fn refuses_edgeless_graph() {
        let g = Graph::from_edges(3, []).unwrap();
        let err = branch_and_bound_max(&g, &ModularityParams::default(), &SolveConfig::exact());
        assert_eq!(err.unwrap_err(), Error::NoEdges);
    }
}

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use modmax::exact::{branch_and_bound_max, SolveConfig, SolveResult};
use modmax::graph::{modularity, Graph, ModularityParams, Partition};
use modmax::heuristics::{Heuristic, HeuristicConfig};
use num_rational::Ratio;

use crate::error::{CliError, Result};

/// An algorithm id accepted on the command line and in run configs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmId {
    Heuristic(Heuristic),
    /// Branch and bound to proven optimality.
    Exact,
    /// Branch and bound stopped at the given relative gap.
    Bnb(f64),
}

impl AlgorithmId {
    pub const VALID: &'static str = "cnm, louvain, leiden, combo, exact, bnb:<tolerance>";
}

impl FromStr for AlgorithmId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(AlgorithmId::Exact);
        }
        if let Some(eps) = s.strip_prefix("bnb:") {
            let eps: f64 = eps.parse().map_err(|_| CliError::UnknownAlgorithm(s.to_string()))?;
            if !(0.0..1.0).contains(&eps) {
                return Err(CliError::Config(format!("bnb tolerance must lie in [0, 1), got {eps}")));
            }
            return Ok(AlgorithmId::Bnb(eps));
        }
        s.parse::<Heuristic>()
            .map(AlgorithmId::Heuristic)
            .map_err(|_| CliError::UnknownAlgorithm(s.to_string()))
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::Heuristic(h) => write!(f, "{h}"),
            AlgorithmId::Exact => f.write_str("exact"),
            AlgorithmId::Bnb(eps) => write!(f, "bnb:{eps}"),
        }
    }
}

/// Result of one timed algorithm call.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub partition: Partition,
    pub q: Ratio<i64>,
    pub elapsed: Duration,
    /// Present for branch-and-bound runs.
    pub solve: Option<SolveResult>,
}

/// Runs `id` once. Only the algorithm call is timed.
pub fn run_algorithm(
    g: &Graph,
    params: &ModularityParams,
    id: AlgorithmId,
    seed: u64,
    solver: &SolveConfig,
) -> Result<Outcome> {
    match id {
        AlgorithmId::Heuristic(h) => {
            let cfg = HeuristicConfig {
                seed,
                gamma: *params,
                ..HeuristicConfig::default()
            };
            let start = Instant::now();
            let partition = h.run(g, &cfg)?;
            let elapsed = start.elapsed();
            let q = modularity(g, &partition, params)?;
            Ok(Outcome {
                partition,
                q,
                elapsed,
                solve: None,
            })
        }
        AlgorithmId::Exact | AlgorithmId::Bnb(_) => {
            let tolerance = match id {
                AlgorithmId::Bnb(eps) => eps,
                _ => 0.0,
            };
            let cfg = SolveConfig {
                tolerance,
                seed,
                enumerate_all: false,
                ..solver.clone()
            };
            let start = Instant::now();
            let r = branch_and_bound_max(g, params, &cfg)?;
            let elapsed = start.elapsed();
            Ok(Outcome {
                partition: r.optima[0].clone(),
                q: r.q_lb,
                elapsed,
                solve: Some(r),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ids() {
        assert_eq!("louvain".parse::<AlgorithmId>().unwrap(), AlgorithmId::Heuristic(Heuristic::Louvain));
        assert_eq!("exact".parse::<AlgorithmId>().unwrap(), AlgorithmId::Exact);
        assert_eq!("bnb:0.1".parse::<AlgorithmId>().unwrap(), AlgorithmId::Bnb(0.1));
        assert_eq!("bnb:0.1".parse::<AlgorithmId>().unwrap().to_string(), "bnb:0.1");
        assert!(matches!("paris".parse::<AlgorithmId>(), Err(CliError::UnknownAlgorithm(_))));
        assert!(matches!("bnb:x".parse::<AlgorithmId>(), Err(CliError::UnknownAlgorithm(_))));
        assert!(matches!("bnb:1.5".parse::<AlgorithmId>(), Err(CliError::Config(_))));
    }
}

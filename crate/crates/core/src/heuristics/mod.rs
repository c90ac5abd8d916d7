//! Inexact modularity maximization: CNM, Louvain, Leiden and Combo.
//!
//! All four work on integer-scaled modularity gains, so ties are exact and
//! runs are reproducible from the seed alone. The resolution parameter is
//! applied uniformly; Leiden with `gamma != 1` covers the LN variant.

mod cnm;
mod combo;
mod leiden;
mod louvain;
mod network;

pub use cnm::cnm;
pub use combo::combo;
pub use leiden::leiden;
pub use louvain::{louvain, louvain_from};
pub use network::communities_connected;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, ModularityParams, Partition};

/// Settings shared by the heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig {
    pub seed: u64,
    pub gamma: ModularityParams,
    /// Upper bound on outer passes (Louvain, Leiden).
    pub max_passes: usize,
    /// Randomness of Leiden's refinement merges.
    pub theta: f64,
    /// Cap on the number of communities Combo may create.
    pub combo_max_communities: Option<usize>,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            seed: 0,
            gamma: ModularityParams::default(),
            max_passes: 100,
            theta: 0.01,
            combo_max_communities: None,
        }
    }
}

impl HeuristicConfig {
    pub fn with_seed(seed: u64) -> Self {
        HeuristicConfig {
            seed,
            ..HeuristicConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be at least 1".into()));
        }
        if !(self.theta > 0.0) {
            return Err(Error::InvalidConfig(format!("theta must be positive, got {}", self.theta)));
        }
        if self.combo_max_communities == Some(0) {
            return Err(Error::InvalidConfig("combo_max_communities must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// The heuristics by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    Cnm,
    Louvain,
    Leiden,
    Combo,
}

impl Heuristic {
    pub const ALL: [Heuristic; 4] = [Heuristic::Cnm, Heuristic::Louvain, Heuristic::Leiden, Heuristic::Combo];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Cnm => "cnm",
            Heuristic::Louvain => "louvain",
            Heuristic::Leiden => "leiden",
            Heuristic::Combo => "combo",
        }
    }

    pub fn run(self, g: &Graph, cfg: &HeuristicConfig) -> Result<Partition> {
        match self {
            Heuristic::Cnm => cnm(g, cfg),
            Heuristic::Louvain => louvain(g, cfg),
            Heuristic::Leiden => leiden(g, cfg),
            Heuristic::Combo => combo(g, cfg),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown heuristic `{s}`")))
    }
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use crate::exact::brute_force_max;
    use crate::graph::modularity;

    #[test]
    fn names_round_trip() {
        for h in Heuristic::ALL {
            assert_eq!(h.name().parse::<Heuristic>().unwrap(), h);
        }
        assert!("paris".parse::<Heuristic>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = HeuristicConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.max_passes = 0;
        assert!(cfg.validate().is_err());
        cfg = HeuristicConfig {
            theta: 0.0,
            ..HeuristicConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn planted_triangles_found_by_all() {
        let g = two_triangles();
        let split = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        for h in Heuristic::ALL {
            for seed in 0..5 {
                let x = h.run(&g, &HeuristicConfig::with_seed(seed)).unwrap();
                assert_eq!(x, split, "{h} seed {seed}");
            }
        }
    }

    #[test]
    fn k3_is_one_community() {
        for h in Heuristic::ALL {
            assert_eq!(h.run(&k3(), &HeuristicConfig::default()).unwrap(), Partition::all_in_one(3), "{h}");
        }
    }

    #[test]
    fn star_matches_oracle() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = ModularityParams::default();
        let oracle = brute_force_max(&star, &p).unwrap();
        assert_eq!(oracle.q_lb, num_rational::Ratio::from_integer(0));
        for h in Heuristic::ALL {
            let x = h.run(&star, &HeuristicConfig::default()).unwrap();
            assert_eq!(modularity(&star, &x, &p).unwrap(), oracle.q_lb, "{h}");
        }
    }

    #[test]
    fn k3_plus_k4() {
        let g = Graph::from_edges(
            7,
            [(0, 1), (1, 2), (0, 2), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)],
        )
        .unwrap();
        let p = ModularityParams::default();
        let oracle = brute_force_max(&g, &p).unwrap();
        let split = Partition::from_labels(&[0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(oracle.optima, vec![split.clone()]);
        // 1 - (6/18)^2 - (12/18)^2
        assert_eq!(oracle.q_lb, num_rational::Ratio::new(4, 9));
        for seed in 0..5 {
            assert_eq!(leiden(&g, &HeuristicConfig::with_seed(seed)).unwrap(), split);
        }
    }

    #[test]
    fn never_beat_the_optimum_and_stay_valid() {
        let p = ModularityParams::default();
        for g in random_suite(60) {
            let q_star = brute_force_max(&g, &p).unwrap().q_lb;
            for h in Heuristic::ALL {
                let x = h.run(&g, &HeuristicConfig::with_seed(3)).unwrap();
                assert_eq!(x.n(), g.n());
                assert!(modularity(&g, &x, &p).unwrap() <= q_star, "{h}");
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        for g in random_suite(20) {
            for h in Heuristic::ALL {
                let cfg = HeuristicConfig::with_seed(11);
                assert_eq!(h.run(&g, &cfg).unwrap(), h.run(&g, &cfg).unwrap());
            }
        }
    }

    #[test]
    fn combo_dominates_cnm_on_small_graphs() {
        let p = ModularityParams::default();
        let suite = random_suite(200);
        let wins = suite
            .iter()
            .filter(|g| {
                let c = modularity(g, &combo(g, &HeuristicConfig::default()).unwrap(), &p).unwrap();
                let n = modularity(g, &cnm(g, &HeuristicConfig::default()).unwrap(), &p).unwrap();
                c >= n
            })
            .count();
        assert!(wins * 10 >= suite.len() * 9, "combo >= cnm on {wins}/{}", suite.len());
    }

    #[test]
    fn leiden_communities_connected() {
        for g in random_suite(60) {
            for seed in 0..3 {
                let x = leiden(&g, &HeuristicConfig::with_seed(seed)).unwrap();
                assert!(communities_connected(&g, &x));
            }
        }
    }
}

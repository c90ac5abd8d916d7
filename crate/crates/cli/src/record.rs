use modmax::graph::Partition;
use modmax::metrics::{self, Measure};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Column order of `records.csv`.
pub const RECORD_HEADER: [&str; 16] = [
    "network",
    "algorithm",
    "seed",
    "q_alg",
    "q_star",
    "gop",
    "ami",
    "rmi",
    "ecs",
    "k_alg",
    "k_star",
    "optima_count",
    "solve_seconds",
    "gap",
    "rmi_approximate",
    "baseline_unavailable",
];

/// One (network, algorithm, seed) evaluation.
///
/// Similarity columns are `None` (blank in CSV) when the baseline is
/// unavailable or the value is undefined, e.g. GOP for `q_star <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub network: String,
    pub algorithm: String,
    pub seed: u64,
    pub q_alg: f64,
    pub q_star: Option<f64>,
    pub gop: Option<f64>,
    pub ami: Option<f64>,
    pub rmi: Option<f64>,
    pub ecs: Option<f64>,
    pub k_alg: usize,
    /// Community count of the optimum with the best AMI.
    pub k_star: Option<usize>,
    pub optima_count: Option<usize>,
    pub solve_seconds: f64,
    /// Relative gap reported by branch-and-bound algorithm runs.
    pub gap: Option<f64>,
    pub rmi_approximate: bool,
    pub baseline_unavailable: bool,
}

/// The exact reference of one network.
#[derive(Debug, Clone)]
pub struct Baseline {
    pub q_star: Ratio<i64>,
    pub optima: Vec<Partition>,
}

/// Similarity columns of one partition against a baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub gop: Option<f64>,
    pub ami: f64,
    pub rmi: Option<f64>,
    pub ecs: f64,
    pub k_star: usize,
    pub rmi_approximate: bool,
}

/// Scores `x`, of modularity `q_alg`, against every optimum.
///
/// A partition equal to one of the optima scores 1 on every measure. GOP is
/// 1 when `q_alg == q_star` and undefined when `q_star <= 0` otherwise. RMI
/// is undefined when no optimum can normalize it.
pub fn score(x: &Partition, q_alg: Ratio<i64>, base: &Baseline) -> Result<Scores> {
    let q_star = to_f64(base.q_star);
    let gop = if q_alg == base.q_star {
        Some(1.0)
    } else if q_star > 0.0 {
        Some(metrics::gop(to_f64(q_alg), q_star)?)
    } else {
        None
    };
    if let Some(hit) = base.optima.iter().find(|o| *o == x) {
        return Ok(Scores {
            gop,
            ami: 1.0,
            rmi: Some(1.0),
            ecs: 1.0,
            k_star: hit.k(),
            rmi_approximate: false,
        });
    }
    let mut best_ami = f64::NEG_INFINITY;
    let mut k_star = 0;
    for o in &base.optima {
        let a = metrics::ami(x, o)?;
        if a > best_ami {
            best_ami = a;
            k_star = o.k();
        }
    }
    let rmi = match metrics::best_rmi_over_optima(x, &base.optima) {
        Ok(r) => Some(r),
        Err(modmax::Error::NonNormalizableReference(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Scores {
        gop,
        ami: best_ami,
        rmi: rmi.map(|r| r.value),
        ecs: metrics::best_over_optima(x, &base.optima, Measure::Ecs)?,
        k_star,
        rmi_approximate: rmi.is_some_and(|r| r.approximate),
    })
}

pub(crate) fn to_f64(q: Ratio<i64>) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(q: Ratio<i64>, optima: &[&[usize]]) -> Baseline {
        Baseline {
            q_star: q,
            optima: optima.iter().map(|l| Partition::from_labels(l)).collect(),
        }
    }

    #[test]
    fn optimum_scores_one_everywhere() {
        let b = base(Ratio::new(1, 2), &[&[0, 0, 0, 1, 1, 1]]);
        let s = score(&Partition::from_labels(&[1, 1, 1, 0, 0, 0]), Ratio::new(1, 2), &b).unwrap();
        assert_eq!((s.gop, s.ami, s.rmi, s.ecs, s.k_star), (Some(1.0), 1.0, Some(1.0), 1.0, 2));
    }

    #[test]
    fn zero_optimum_leaves_gop_undefined() {
        let b = base(Ratio::new(0, 1), &[&[0, 0, 0]]);
        let s = score(&Partition::from_labels(&[0, 1, 2]), Ratio::new(-1, 3), &b).unwrap();
        assert_eq!(s.gop, None);
        // the all-in-one optimum cannot normalize RMI
        assert_eq!(s.rmi, None);
        assert_eq!(s.ami, 0.0);
        let s = score(&Partition::from_labels(&[0, 0, 0]), Ratio::new(0, 1), &b).unwrap();
        assert_eq!(s.gop, Some(1.0));
    }

    #[test]
    fn k_star_follows_best_ami() {
        let b = base(Ratio::new(1, 4), &[&[0, 0, 0, 0, 1, 1], &[0, 0, 1, 1, 2, 2]]);
        let s = score(&Partition::from_labels(&[0, 0, 1, 1, 2, 3]), Ratio::new(1, 8), &b).unwrap();
        assert_eq!(s.k_star, 3);
        assert_eq!(s.gop, Some(0.5));
    }
}

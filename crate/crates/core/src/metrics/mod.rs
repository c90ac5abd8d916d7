//! Partition similarity and optimality measures: GOP, AMI, RMI and ECS,
//! plus the max-over-optima protocol used when the optimum is not unique.
//!
//! Information measures use natural logarithms.

mod contingency;
mod information;
mod tables;

pub use contingency::ContingencyTable;
pub use information::{ami, entropy, expected_mutual_information, mutual_information};
pub use tables::{count_tables, TableCount, EXACT_MAX_CELLS, EXACT_MAX_TOTAL};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Partition;

/// Float tolerance for `q_alg` exceeding `q_star`.
pub const GOP_GUARD: f64 = 1e-9;

/// Default ECS restart parameter.
pub const DEFAULT_ECS_ALPHA: f64 = 0.9;

/// Global optimality percentage `q_alg / q_star`, as a fraction.
///
/// Negative `q_alg` gives 0; values above 1 within [`GOP_GUARD`] clamp to 1.
pub fn gop(q_alg: f64, q_star: f64) -> Result<f64> {
    if !(q_star > 0.0) {
        return Err(Error::NonPositiveOptimum(q_star));
    }
    if q_alg > q_star + GOP_GUARD {
        return Err(Error::ExceedsOptimum { q_alg, q_star });
    }
    if q_alg < 0.0 {
        return Ok(0.0);
    }
    Ok((q_alg / q_star).min(1.0))
}

/// Reduced mutual information and whether a table count was estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rmi {
    pub value: f64,
    pub approximate: bool,
}

/// `I(X;Y) - ln Omega(a, b) / n`, where `Omega` counts the contingency
/// tables with the observed margins.
pub fn reduced_mutual_information(x: &Partition, y: &Partition) -> Result<Rmi> {
    let t = ContingencyTable::new(x, y)?;
    let omega = count_tables(t.row_sums(), t.col_sums())?;
    Ok(Rmi {
        value: mutual_information(&t) - omega.ln_count / t.n() as f64,
        approximate: omega.approximate,
    })
}

/// RMI of `x` normalized by the reference's self-information:
/// `RMI(X;Y) / RMI(Y;Y)`. Asymmetric; 1 when `x` equals the reference.
pub fn rmi(x: &Partition, reference: &Partition) -> Result<Rmi> {
    let raw = reduced_mutual_information(x, reference)?;
    let own = reduced_mutual_information(reference, reference)?;
    if !(own.value > 0.0) {
        return Err(Error::NonNormalizableReference(own.value));
    }
    let value = if x == reference { 1.0 } else { raw.value / own.value };
    Ok(Rmi {
        value,
        approximate: raw.approximate || own.approximate,
    })
}

/// Element-centric similarity of two flat partitions.
///
/// Node `i`'s affinity vector puts `alpha / |c(i)|` on each member of its
/// community plus `1 - alpha` on itself; the per-node score is
/// `1 - L1 / (2 alpha)` and the result is the mean. Symmetric, in `[0, 1]`,
/// 1 exactly for identical partitions.
pub fn ecs(x: &Partition, y: &Partition, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let t = ContingencyTable::new(x, y)?;
    if x == y {
        return Ok(1.0);
    }
    // a cell with s shared nodes contributes s^2 / max(|cx|, |cy|); the self
    // terms cancel, so alpha drops out. Integer sums per denominator keep
    // the common cases exact.
    let mut by_size: BTreeMap<u64, u64> = BTreeMap::new();
    for (i, row) in t.counts().iter().enumerate() {
        for (j, &shared) in row.iter().enumerate() {
            if shared > 0 {
                let size = t.row_sums()[i].max(t.col_sums()[j]);
                *by_size.entry(size).or_default() += shared * shared;
            }
        }
    }
    let n = x.n();
    let total: f64 = by_size.iter().map(|(&d, &s)| s as f64 / d as f64).sum();
    Ok((total / n as f64).clamp(0.0, 1.0))
}

/// A similarity measure usable with [`best_over_optima`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Ami,
    Rmi,
    Ecs,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Ami => "ami",
            Measure::Rmi => "rmi",
            Measure::Ecs => "ecs",
        }
    }

    /// `x` against `reference`; RMI takes `reference` as the normalizer.
    pub fn evaluate(self, x: &Partition, reference: &Partition) -> Result<f64> {
        match self {
            Measure::Ami => ami(x, reference),
            Measure::Rmi => rmi(x, reference).map(|r| r.value),
            Measure::Ecs => ecs(x, reference, DEFAULT_ECS_ALPHA),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Measure::Ami, Measure::Rmi, Measure::Ecs]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown measure `{s}`")))
    }
}

/// Maximum of `measure(x, optimum)` over the optima.
///
/// For RMI, optima that cannot normalize are skipped; the call fails only
/// when none can.
pub fn best_over_optima(x: &Partition, optima: &[Partition], measure: Measure) -> Result<f64> {
    best_rmi_or(x, optima, measure).map(|(v, _)| v)
}

/// Best RMI over the optima with its approximation flag.
pub fn best_rmi_over_optima(x: &Partition, optima: &[Partition]) -> Result<Rmi> {
    best_rmi_or(x, optima, Measure::Rmi).map(|(value, approximate)| Rmi { value, approximate })
}

fn best_rmi_or(x: &Partition, optima: &[Partition], measure: Measure) -> Result<(f64, bool)> {
    if optima.is_empty() {
        return Err(Error::EmptyOptima);
    }
    let mut best: Option<(f64, bool)> = None;
    let mut last_err = None;
    for opt in optima {
        let value = match measure {
            Measure::Rmi => rmi(x, opt).map(|r| (r.value, r.approximate)),
            other => other.evaluate(x, opt).map(|v| (v, false)),
        };
        match value {
            Ok(v) => {
                if best.map_or(true, |b| v.0 > b.0) {
                    best = Some(v);
                }
            }
            Err(e @ Error::NonNormalizableReference(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::EmptyOptima))
}

/// The four values reported for one algorithm result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub gop: f64,
    pub ami: f64,
    pub rmi: f64,
    pub ecs: f64,
    pub optima_count: usize,
    pub rmi_approximate: bool,
}

impl SimilarityReport {
    /// Scores `x` (with modularity `q_alg`) against every optimum.
    pub fn compute(x: &Partition, q_alg: f64, q_star: f64, optima: &[Partition]) -> Result<Self> {
        let r = best_rmi_over_optima(x, optima)?;
        Ok(SimilarityReport {
            gop: gop(q_alg, q_star)?,
            ami: best_over_optima(x, optima, Measure::Ami)?,
            rmi: r.value,
            ecs: best_over_optima(x, optima, Measure::Ecs)?,
            optima_count: optima.len(),
            rmi_approximate: r.approximate,
        })
    }
}

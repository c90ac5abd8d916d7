use std::time::Instant;

use super::{SolveResult, Termination};
use crate::error::{Error, Result};
use crate::graph::{Graph, ModularityMatrix, ModularityParams, Partition};

/// Largest node count [`brute_force_max`] accepts by default (Bell(13) is
/// about 2.8e7 partitions).
pub const BRUTE_FORCE_LIMIT: usize = 13;

/// Exhaustive maximization over every set partition of the nodes.
pub fn brute_force_max(g: &Graph, p: &ModularityParams) -> Result<SolveResult> {
    brute_force_max_with_limit(g, p, BRUTE_FORCE_LIMIT)
}

/// [`brute_force_max`] with a caller-chosen node limit.
pub fn brute_force_max_with_limit(g: &Graph, p: &ModularityParams, limit: usize) -> Result<SolveResult> {
    if g.n() > limit {
        return Err(Error::TooLargeForBruteForce { n: g.n(), limit });
    }
    let start = Instant::now();
    let matrix = ModularityMatrix::new(g, p)?;
    let mut sweep = Sweep {
        matrix: &matrix,
        labels: vec![0; g.n()],
        best: i64::MIN,
        optima: Vec::new(),
        visited: 0,
    };
    sweep.assign(0, 0, 0);
    let q = matrix.to_modularity(sweep.best);
    let mut optima: Vec<Partition> = sweep.optima.iter().map(|l| Partition::from_labels(l)).collect();
    optima.sort();
    Ok(SolveResult {
        optima,
        q_lb: q,
        q_ub: q,
        gap: 0.0,
        proven_optimal: true,
        enumeration_complete: true,
        nodes_explored: sweep.visited,
        elapsed: start.elapsed(),
        termination: Termination::Optimal,
    })
}

/// Walks restricted-growth strings: node `t` joins one of the `used`
/// communities opened so far, or opens a new one.
struct Sweep<'a> {
    matrix: &'a ModularityMatrix,
    labels: Vec<usize>,
    best: i64,
    optima: Vec<Vec<usize>>,
    visited: u64,
}

impl Sweep<'_> {
    fn assign(&mut self, t: usize, used: usize, value: i64) {
        let n = self.labels.len();
        if t == n {
            self.visited += 1;
            if value > self.best {
                self.best = value;
                self.optima.clear();
            }
            if value == self.best {
                self.optima.push(self.labels.clone());
            }
            return;
        }
        for c in 0..=used {
            let mut delta = self.matrix.get(t, t);
            for u in 0..t {
                if self.labels[u] == c {
                    delta += 2 * self.matrix.get(t, u);
                }
            }
            self.labels[t] = c;
            let next_used = if c == used { used + 1 } else { used };
            self.assign(t + 1, next_used, value + delta);
        }
    }
}

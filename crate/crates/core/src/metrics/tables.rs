use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use super::information::ln_factorials;
use crate::error::{Error, Result};

/// Largest total for which tables are counted exactly.
pub const EXACT_MAX_TOTAL: u64 = 40;
/// Largest `rows * cols` for which tables are counted exactly.
pub const EXACT_MAX_CELLS: usize = 64;

/// Number of non-negative integer matrices with prescribed margins.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCount {
    /// The exact count, when it was computed exactly.
    pub exact: Option<BigUint>,
    /// Natural log of the (exact or estimated) count.
    pub ln_count: f64,
    pub approximate: bool,
}

/// Counts the non-negative integer tables with row sums `rows` and column
/// sums `cols`.
///
/// Exact (dynamic programming over sorted remaining column sums) when the
/// total is at most [`EXACT_MAX_TOTAL`] and the table has at most
/// [`EXACT_MAX_CELLS`] cells; otherwise a second-order estimate based on a
/// Dirichlet-multinomial fit of the row sums, flagged `approximate`.
pub fn count_tables(rows: &[u64], cols: &[u64]) -> Result<TableCount> {
    let (r_sum, c_sum): (u64, u64) = (rows.iter().sum(), cols.iter().sum());
    if r_sum != c_sum {
        return Err(Error::MarginalMismatch { rows: r_sum, cols: c_sum });
    }
    let mut a: Vec<u64> = rows.iter().copied().filter(|&v| v > 0).collect();
    let mut b: Vec<u64> = cols.iter().copied().filter(|&v| v > 0).collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));
    if a.len() > b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if a.len() * b.len() <= EXACT_MAX_CELLS && r_sum <= EXACT_MAX_TOTAL {
        let exact = cached_exact(a, b);
        let ln_count = ln_big(&exact);
        return Ok(TableCount {
            exact: Some(exact),
            ln_count,
            approximate: false,
        });
    }
    Ok(estimate(&a, &b))
}

fn cached_exact(a: Vec<u64>, b: Vec<u64>) -> BigUint {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u64>, Vec<u64>), BigUint>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (a, b);
    if let Some(hit) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return hit.clone();
    }
    let value = count_exact(&key.0, &key.1);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, value.clone());
    value
}

/// Row-by-row DP; the state is the multiset of remaining column sums.
fn count_exact(rows: &[u64], cols: &[u64]) -> BigUint {
    let mut states: HashMap<Vec<u64>, BigUint> = HashMap::new();
    let mut start = cols.to_vec();
    start.sort_unstable();
    states.insert(start, BigUint::one());
    for &r in rows {
        let mut next: HashMap<Vec<u64>, BigUint> = HashMap::new();
        for (state, ways) in &states {
            let mut remaining = state.clone();
            distribute(&mut remaining, 0, r, &mut |after: &[u64]| {
                let mut key = after.to_vec();
                key.sort_unstable();
                *next.entry(key).or_insert_with(BigUint::zero) += ways;
            });
        }
        states = next;
    }
    states.into_iter().filter(|(s, _)| s.iter().all(|&v| v == 0)).map(|(_, w)| w).sum()
}

/// Visits every way of taking `left` units from `remaining[j..]`.
fn distribute(remaining: &mut [u64], j: usize, left: u64, visit: &mut dyn FnMut(&[u64])) {
    if j == remaining.len() {
        if left == 0 {
            visit(remaining);
        }
        return;
    }
    let tail: u64 = remaining[j + 1..].iter().sum();
    let lo = left.saturating_sub(tail);
    let hi = left.min(remaining[j]);
    for take in lo..=hi {
        remaining[j] -= take;
        distribute(remaining, j + 1, left - take, visit);
        remaining[j] += take;
    }
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Estimate with `rows` the shorter margin: columns are spread uniformly
/// over the rows and the row sums corrected by a Dirichlet-multinomial
/// matched to their variance. Degenerate margins are counted exactly.
fn estimate(rows: &[u64], cols: &[u64]) -> TableCount {
    let n: u64 = rows.iter().sum();
    let exact_ln = |ln_count: f64| TableCount {
        exact: None,
        ln_count,
        approximate: false,
    };
    if rows.len() <= 1 || cols.len() <= 1 {
        return exact_ln(0.0);
    }
    let lf = ln_factorials(n);
    if cols.iter().all(|&c| c == 1) {
        return exact_ln(lf[n as usize] - rows.iter().map(|&r| lf[r as usize]).sum::<f64>());
    }
    if rows.iter().all(|&r| r == 1) {
        return exact_ln(lf[n as usize] - cols.iter().map(|&c| lf[c as usize]).sum::<f64>());
    }
    let nf = n as f64;
    let m = rows.len() as f64;
    let sq: f64 = cols.iter().map(|&c| (c * c) as f64).sum();
    let alpha = (nf * nf - nf + (nf * nf - sq) / m) / (sq - nf);
    let ln_count = -ln_binomial(nf + m * alpha - 1.0, m * alpha - 1.0)
        + rows.iter().map(|&r| ln_binomial(r as f64 + alpha - 1.0, alpha - 1.0)).sum::<f64>()
        + cols.iter().map(|&c| ln_binomial(c as f64 + m - 1.0, m - 1.0)).sum::<f64>();
    TableCount {
        exact: None,
        ln_count,
        approximate: true,
    }
}

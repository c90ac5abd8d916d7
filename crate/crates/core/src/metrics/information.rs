use super::ContingencyTable;
use crate::error::Result;
use crate::graph::Partition;

/// Shannon entropy (nats) of a partition with the given community sizes.
pub fn entropy(sizes: &[u64]) -> f64 {
    let n: u64 = sizes.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    -sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Mutual information (nats) between the two partitions of a table.
pub fn mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n() as f64;
    let mut total = 0.0;
    for (i, row) in t.counts().iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                let a = t.row_sums()[i] as f64;
                let b = t.col_sums()[j] as f64;
                total += c / n * (n * c / (a * b)).ln();
            }
        }
    }
    total.max(0.0)
}

/// `ln k!` for `k` in `0..=n`.
pub(crate) fn ln_factorials(n: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Expected mutual information under the permutation model with the
/// table's marginals held fixed (hypergeometric cell distribution).
pub fn expected_mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n();
    let lf = ln_factorials(n);
    let nf = n as f64;
    let mut total = 0.0;
    for &a in t.row_sums() {
        for &b in t.col_sums() {
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            for c in lo..=hi {
                let ln_p = lf[a as usize] + lf[b as usize] + lf[(n - a) as usize] + lf[(n - b) as usize]
                    - lf[n as usize]
                    - lf[c as usize]
                    - lf[(a - c) as usize]
                    - lf[(b - c) as usize]
                    - lf[(n + c - a - b) as usize];
                let cf = c as f64;
                total += cf / nf * (nf * cf / (a as f64 * b as f64)).ln() * ln_p.exp();
            }
        }
    }
    total
}

/// Adjusted mutual information with the arithmetic-mean normalization:
/// `(I - E[I]) / ((H(X) + H(Y)) / 2 - E[I])`.
///
/// Symmetric; 1 for identical partitions, including the case where both
/// are a single community.
pub fn ami(x: &Partition, y: &Partition) -> Result<f64> {
    let t = ContingencyTable::new(x, y)?;
    if x == y {
        return Ok(1.0);
    }
    let mi = mutual_information(&t);
    let emi = expected_mutual_information(&t);
    let mean = 0.5 * (entropy(t.row_sums()) + entropy(t.col_sums()));
    let denom = mean - emi;
    if denom.abs() < 1e-15 {
        return Ok(if (mi - emi).abs() < 1e-15 { 1.0 } else { 0.0 });
    }
    Ok((mi - emi) / denom)
}

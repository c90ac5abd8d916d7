use crate::error::{Error, Result};
use crate::graph::Partition;

/// Overlap counts between the communities of two partitions of the same
/// nodes. Rows index communities of the first partition, columns the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    rows: Vec<u64>,
    cols: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn new(x: &Partition, y: &Partition) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::SizeMismatch {
                partition: x.n(),
                graph: y.n(),
            });
        }
        let mut counts = vec![vec![0u64; y.k()]; x.k()];
        for v in 0..x.n() {
            counts[x.label(v)][y.label(v)] += 1;
        }
        let rows = counts.iter().map(|r| r.iter().sum()).collect();
        let mut cols = vec![0u64; y.k()];
        for r in &counts {
            for (c, &v) in cols.iter_mut().zip(r) {
                *c += v;
            }
        }
        Ok(ContingencyTable {
            counts,
            rows,
            cols,
            n: x.n() as u64,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// Community sizes of the first partition.
    pub fn row_sums(&self) -> &[u64] {
        &self.rows
    }

    /// Community sizes of the second partition.
    pub fn col_sums(&self) -> &[u64] {
        &self.cols
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

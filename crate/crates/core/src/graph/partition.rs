use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complete, non-overlapping assignment of nodes `0..n` to communities.
///
/// Labels are always canonical: `0..k` in order of first occurrence. Two
/// partitions compare equal exactly when they group the nodes the same way.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary label vector.
    pub fn from_labels(raw: &[usize]) -> Partition {
        canonicalize(raw)
    }

    /// Builds a partition from explicit member lists. Every node `0..n` must
    /// appear exactly once.
    pub fn from_communities<C: AsRef<[usize]>>(n: usize, communities: &[C]) -> Result<Partition> {
        let mut raw = vec![usize::MAX; n];
        let mut seen = 0;
        for (c, members) in communities.iter().enumerate() {
            for &v in members.as_ref() {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
                if raw[v] != usize::MAX {
                    return Err(Error::SizeMismatch {
                        partition: seen + 1,
                        graph: n,
                    });
                }
                raw[v] = c;
                seen += 1;
            }
        }
        if seen != n {
            return Err(Error::SizeMismatch {
                partition: seen,
                graph: n,
            });
        }
        Ok(canonicalize(&raw))
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Partition {
        Partition {
            labels: (0..n).collect(),
            k: n,
        }
    }

    /// All nodes in one community.
    pub fn all_in_one(n: usize) -> Partition {
        Partition {
            labels: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of communities.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn same_community(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Member lists, indexed by label; members are ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &c in &self.labels {
            out[c] += 1;
        }
        out
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::SizeMismatch {
                partition: self.n(),
                graph: n,
            });
        }
        Ok(())
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.labels
    }
}

impl From<Vec<usize>> for Partition {
    fn from(raw: Vec<usize>) -> Partition {
        canonicalize(&raw)
    }
}

/// Relabels communities `0..k` by first occurrence. Idempotent.
pub fn canonicalize(raw: &[usize]) -> Partition {
    let mut map = std::collections::HashMap::new();
    let labels: Vec<usize> = raw
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect();
    Partition { labels, k: map.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn relabels_by_first_occurrence() {
        assert_eq!(canonicalize(&[7, 7, 2]).labels(), [0, 0, 1]);
        assert_eq!(canonicalize(&[2, 0, 2, 0]).labels(), [0, 1, 0, 1]);
        let p = canonicalize(&[0, 1, 0, 2]);
        assert_eq!(canonicalize(p.labels()), p);
    }

    #[test]
    fn from_communities_rejects_gaps_and_overlaps() {
        assert!(Partition::from_communities(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_communities(3, &[vec![0, 1], vec![1, 2]]).is_err());
        let p = Partition::from_communities(4, &[vec![1, 2], vec![0, 3]]).unwrap();
        assert_eq!(p.labels(), [0, 1, 1, 0]);
        assert_eq!(p.communities(), vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn trivial_partitions() {
        assert_eq!(Partition::singletons(3).k(), 3);
        assert_eq!(Partition::all_in_one(3).labels(), [0, 0, 0]);
        assert_eq!(Partition::all_in_one(3).k(), 1);
    }

    proptest! {
        #[test]
        fn canonicalize_preserves_co_membership(raw in prop::collection::vec(0usize..6, 1..20)) {
            let p = canonicalize(&raw);
            prop_assert_eq!(canonicalize(p.labels()), p.clone());
            for i in 0..raw.len() {
                for j in 0..raw.len() {
                    prop_assert_eq!(raw[i] == raw[j], p.same_community(i, j));
                }
            }
            prop_assert!(p.labels().iter().all(|&c| c < p.k()));
        }
    }
}

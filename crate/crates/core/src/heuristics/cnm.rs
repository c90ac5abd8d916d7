use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::HeuristicConfig;
use crate::error::Result;
use crate::graph::{canonicalize, Graph, Partition, Scale};

/// Greedy agglomeration: repeatedly merges the pair of adjacent communities
/// with the largest positive modularity gain.
///
/// Ties go to the lexicographically smallest pair of community ids, where a
/// community's id is its smallest member. Deterministic; the seed is unused.
pub fn cnm(g: &Graph, cfg: &HeuristicConfig) -> Result<Partition> {
    cfg.validate()?;
    let scale = Scale::new(g, &cfg.gamma)?;
    let n = g.n();
    // links[c][d]: number of edges between communities c and d
    let mut links: Vec<BTreeMap<usize, i64>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect())
        .collect();
    let mut total: Vec<i64> = g.degrees().into_iter().map(|d| d as i64).collect();
    let mut owner: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    let gain = |links: &[BTreeMap<usize, i64>], total: &[i64], c: usize, d: usize| {
        2 * (scale.two_m_q * links[c].get(&d).copied().unwrap_or(0) - scale.p * total[c] * total[d])
    };
    let mut heap = BinaryHeap::new();
    for &(u, v) in g.edges() {
        heap.push((gain(&links, &total, u, v), Reverse((u, v))));
    }
    while let Some((delta, Reverse((c, d)))) = heap.pop() {
        if delta <= 0 {
            break;
        }
        if !alive[c] || !alive[d] || gain(&links, &total, c, d) != delta {
            continue;
        }
        // merge d into c; c < d keeps ids equal to smallest members
        alive[d] = false;
        total[c] += total[d];
        let moved = std::mem::take(&mut links[d]);
        links[c].remove(&d);
        for (e, w) in moved {
            if e == c {
                continue;
            }
            links[e].remove(&d);
            *links[e].entry(c).or_insert(0) += w;
            *links[c].entry(e).or_insert(0) += w;
        }
        for o in owner.iter_mut().filter(|o| **o == d) {
            *o = c;
        }
        for &e in links[c].keys() {
            let pair = if c < e { (c, e) } else { (e, c) };
            heap.push((gain(&links, &total, pair.0, pair.1), Reverse(pair)));
        }
    }
    Ok(canonicalize(&owner))
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::graph::{modularity, ModularityParams};

    /// Quadratic reference: rescans every adjacent pair before each merge.
    fn cnm_reference(g: &Graph) -> Partition {
        let p = ModularityParams::default();
        let mut labels: Vec<usize> = (0..g.n()).collect();
        loop {
            let base = modularity(g, &Partition::from_labels(&labels), &p).unwrap();
            let mut best: Option<(num_rational::Ratio<i64>, (usize, usize))> = None;
            for &(u, v) in g.edges() {
                let (c, d) = (labels[u].min(labels[v]), labels[u].max(labels[v]));
                if c == d {
                    continue;
                }
                let merged: Vec<usize> = labels.iter().map(|&l| if l == d { c } else { l }).collect();
                let gain = modularity(g, &Partition::from_labels(&merged), &p).unwrap() - base;
                let better = match best {
                    None => true,
                    Some((b, pair)) => gain > b || (gain == b && (c, d) < pair),
                };
                if better {
                    best = Some((gain, (c, d)));
                }
            }
            match best {
                Some((gain, (c, d))) if gain > num_rational::Ratio::from_integer(0) => {
                    for l in labels.iter_mut() {
                        if *l == d {
                            *l = c;
                        }
                    }
                }
                _ => return Partition::from_labels(&labels),
            }
        }
    }

    #[test]
    fn matches_quadratic_reference() {
        for g in random_suite(80) {
            assert_eq!(cnm(&g, &HeuristicConfig::default()).unwrap(), cnm_reference(&g));
        }
    }

    #[test]
    fn merges_triangles() {
        let x = cnm(&two_triangles(), &HeuristicConfig::default()).unwrap();
        assert_eq!(x.labels(), [0, 0, 0, 1, 1, 1]);
    }
}

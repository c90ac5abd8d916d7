use super::HeuristicConfig;
use crate::error::Result;
use crate::graph::{canonicalize, Graph, ModularityMatrix, Partition};

/// Combo-style optimization from a single community.
///
/// Each round evaluates, for every ordered pair of communities (and every
/// community paired with a fresh empty one), the gain of merging them and
/// of one Kernighan–Lin pass between them with best-prefix selection. The
/// single best strictly positive move is applied; the search stops when no
/// move improves. Deterministic; the seed is unused.
pub fn combo(g: &Graph, cfg: &HeuristicConfig) -> Result<Partition> {
    cfg.validate()?;
    let matrix = ModularityMatrix::new(g, &cfg.gamma)?;
    Ok(optimize(&matrix, cfg.combo_max_communities, None))
}

pub(super) fn optimize(matrix: &ModularityMatrix, cap: Option<usize>, mut trace: Option<&mut Vec<i64>>) -> Partition {
    let n = matrix.n();
    let mut labels = vec![0usize; n];
    let mut k = 1;
    loop {
        if let Some(t) = trace.as_deref_mut() {
            t.push(matrix.objective(&canonicalize(&labels)));
        }
        let members: Vec<Vec<usize>> = {
            let mut m = vec![Vec::new(); k];
            for (v, &c) in labels.iter().enumerate() {
                m[c].push(v);
            }
            m
        };
        let mut best: Option<(i64, Move)> = None;
        let mut consider = |gain: i64, mv: Move| {
            if gain > 0 && best.as_ref().map_or(true, |b| gain > b.0) {
                best = Some((gain, mv));
            }
        };
        for s in 0..k {
            for d in s + 1..k {
                let w: i64 = members[s]
                    .iter()
                    .map(|&i| members[d].iter().map(|&j| matrix.get(i, j)).sum::<i64>())
                    .sum();
                consider(2 * w, Move::Merge(s, d));
                let (gain, moved) = kernighan_lin(matrix, &labels, s, d, &members);
                consider(gain, Move::Shift(moved, s, d));
            }
            if cap.map_or(true, |c| k < c) {
                let (gain, moved) = kernighan_lin(matrix, &labels, s, k, &members);
                consider(gain, Move::Shift(moved, s, k));
            }
        }
        let Some((_, mv)) = best else { break };
        match mv {
            Move::Merge(s, d) => {
                for c in labels.iter_mut() {
                    if *c == d {
                        *c = s;
                    }
                }
            }
            Move::Shift(moved, s, d) => {
                for v in moved {
                    labels[v] = if labels[v] == s { d } else { s };
                }
            }
        }
        let compact = canonicalize(&labels);
        k = compact.k();
        labels = compact.labels().to_vec();
    }
    canonicalize(&labels)
}

enum Move {
    Merge(usize, usize),
    /// Nodes that swap sides between the two communities.
    Shift(Vec<usize>, usize, usize),
}

/// One Kernighan–Lin pass between communities `s` and `d` (`d` may be a new,
/// empty label). Every node of either side moves at most once, always the
/// one with the largest gain; returns the best prefix gain and its moves.
fn kernighan_lin(
    matrix: &ModularityMatrix,
    labels: &[usize],
    s: usize,
    d: usize,
    members: &[Vec<usize>],
) -> (i64, Vec<usize>) {
    let mut nodes: Vec<usize> = members[s].clone();
    if d < members.len() {
        nodes.extend(&members[d]);
    }
    // side[i]: true when nodes[i] currently sits in `s`
    let mut side: Vec<bool> = nodes.iter().map(|&v| labels[v] == s).collect();
    let mut to_s = vec![0i64; nodes.len()];
    let mut to_d = vec![0i64; nodes.len()];
    for (a, &u) in nodes.iter().enumerate() {
        for (b, &v) in nodes.iter().enumerate() {
            if side[b] {
                to_s[a] += matrix.get(u, v);
            } else {
                to_d[a] += matrix.get(u, v);
            }
        }
    }
    let mut done = vec![false; nodes.len()];
    let mut sequence = Vec::new();
    let mut running = 0i64;
    let mut best = (0i64, 0usize);
    for _ in 0..nodes.len() {
        let mut pick: Option<(i64, usize)> = None;
        for a in 0..nodes.len() {
            if done[a] {
                continue;
            }
            let v = nodes[a];
            let (from, to) = if side[a] { (to_s[a], to_d[a]) } else { (to_d[a], to_s[a]) };
            let gain = 2 * (to - from + matrix.get(v, v));
            if pick.map_or(true, |p| gain > p.0) {
                pick = Some((gain, a));
            }
        }
        let Some((gain, a)) = pick else { break };
        done[a] = true;
        let u = nodes[a];
        for (b, &v) in nodes.iter().enumerate() {
            let w = matrix.get(v, u);
            if side[a] {
                to_s[b] -= w;
                to_d[b] += w;
            } else {
                to_d[b] -= w;
                to_s[b] += w;
            }
        }
        side[a] = !side[a];
        sequence.push(u);
        running += gain;
        if running > best.0 {
            best = (running, sequence.len());
        }
    }
    sequence.truncate(best.1);
    (best.0, sequence)
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::graph::ModularityParams;

    #[test]
    fn objective_strictly_increases() {
        for g in random_suite(40) {
            let m = ModularityMatrix::new(&g, &ModularityParams::default()).unwrap();
            let mut trace = Vec::new();
            optimize(&m, None, Some(&mut trace));
            assert!(trace.windows(2).all(|w| w[0] < w[1]), "{trace:?}");
        }
    }

    #[test]
    fn respects_community_cap() {
        let g = Graph::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n6 7\n7 8\n8 6\n2 3\n5 6\n").unwrap();
        let cfg = HeuristicConfig::default();
        assert_eq!(combo(&g, &cfg).unwrap().k(), 3);
        let capped = HeuristicConfig {
            combo_max_communities: Some(2),
            ..cfg
        };
        assert_eq!(combo(&g, &capped).unwrap().k(), 2);
    }

    #[test]
    fn kl_pass_finds_split() {
        let g = two_triangles();
        let m = ModularityMatrix::new(&g, &ModularityParams::default()).unwrap();
        let labels = vec![0; 6];
        let members = vec![(0..6).collect::<Vec<_>>()];
        let (gain, moved) = kernighan_lin(&m, &labels, 0, 1, &members);
        let mut moved = moved;
        moved.sort();
        assert!(moved == [0, 1, 2] || moved == [3, 4, 5], "{moved:?}");
        // Q rises from 0 to 1/2
        assert_eq!(m.to_modularity(gain), num_rational::Ratio::new(1, 2));
    }
}

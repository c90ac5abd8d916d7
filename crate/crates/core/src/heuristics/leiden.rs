use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::network::{split_disconnected, Network};
use super::HeuristicConfig;
use crate::error::Result;
use crate::graph::{canonicalize, Graph, Partition, Scale};

/// Leiden: fast local moving, refinement, and aggregation by the refined
/// partition. Every returned community induces a connected subgraph.
pub fn leiden(g: &Graph, cfg: &HeuristicConfig) -> Result<Partition> {
    run(g, cfg, None)
}

pub(super) fn run(g: &Graph, cfg: &HeuristicConfig, mut trace: Option<&mut Vec<i64>>) -> Result<Partition> {
    cfg.validate()?;
    let scale = Scale::new(g, &cfg.gamma)?;
    let mut rng = cfg.rng();
    let base = Network::from_graph(g);
    let mut current = Partition::singletons(g.n());
    for _ in 0..cfg.max_passes {
        let next = pass(&base, &current, &scale, cfg.theta, &mut rng, trace.as_deref_mut());
        if next == current {
            break;
        }
        current = next;
    }
    Ok(split_disconnected(g, &current))
}

/// One full hierarchy starting from `start` on the base network.
fn pass<R: Rng>(
    base: &Network,
    start: &Partition,
    scale: &Scale,
    theta: f64,
    rng: &mut R,
    mut trace: Option<&mut Vec<i64>>,
) -> Partition {
    let mut net = base.clone();
    // aggregate node of each base node
    let mut node_of: Vec<usize> = (0..base.n()).collect();
    let mut labels = start.labels().to_vec();
    loop {
        fast_local_move(&net, &mut labels, scale, rng);
        let coarse = canonicalize(&labels);
        if let Some(t) = trace.as_deref_mut() {
            let flat: Vec<usize> = node_of.iter().map(|&a| coarse.label(a)).collect();
            t.push(base.objective(&flat, scale));
        }
        if coarse.k() == net.n() {
            return canonicalize(&node_of.iter().map(|&a| coarse.label(a)).collect::<Vec<_>>());
        }
        let mut refined = refine(&net, coarse.labels(), scale, theta, rng);
        if refined.k() == net.n() {
            refined = coarse.clone();
        }
        let agg = net.aggregate(refined.labels());
        let mut next_labels = vec![0; agg.n()];
        for v in 0..net.n() {
            next_labels[refined.label(v)] = coarse.label(v);
        }
        for a in node_of.iter_mut() {
            *a = refined.label(*a);
        }
        net = agg;
        labels = next_labels;
    }
}

/// Queue-based local moving. Nodes may also move to an empty community.
/// Labels index `0..net.n()`.
fn fast_local_move<R: Rng>(net: &Network, labels: &mut [usize], scale: &Scale, rng: &mut R) {
    let n = net.n();
    let mut total = vec![0i64; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        total[labels[v]] += net.strength[v];
        size[labels[v]] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut queue: VecDeque<usize> = order.into_iter().collect();
    let mut queued = vec![true; n];
    let mut link = vec![0i64; n];
    let mut touched = Vec::new();
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let own = labels[v];
        let s = net.strength[v];
        touched.clear();
        touched.push(own);
        for &(u, w) in &net.adj[v] {
            let c = labels[u];
            if link[c] == 0 && !touched.contains(&c) {
                touched.push(c);
            }
            link[c] += w;
        }
        total[own] -= s;
        size[own] -= 1;
        let score = |c: usize| scale.two_m_q * link[c] - scale.p * s * total[c];
        let stay = score(own);
        let mut best = (stay, own);
        for &c in &touched {
            let sc = score(c);
            if sc > best.0 || (sc == best.0 && c < best.1 && sc > stay) {
                best = (sc, c);
            }
        }
        // an empty community scores 0
        if size[own] > 0 && best.0 < 0 {
            if let Some(&c) = empty.last() {
                best = (0, c);
            }
        }
        for &c in &touched {
            link[c] = 0;
        }
        let target = if best.0 > stay { best.1 } else { own };
        if size[target] == 0 && target != own {
            empty.pop();
        }
        total[target] += s;
        size[target] += 1;
        if size[own] == 0 && target != own {
            empty.push(own);
        }
        if target != own {
            labels[v] = target;
            for &(u, _) in &net.adj[v] {
                if !queued[u] && labels[u] != target {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
}

/// Refines each community of `coarse` by randomized merging of singletons
/// into well-connected subcommunities.
fn refine<R: Rng>(net: &Network, coarse: &[usize], scale: &Scale, theta: f64, rng: &mut R) -> Partition {
    let n = net.n();
    let k = coarse.iter().max().map_or(0, |&c| c + 1);
    let mut coarse_total = vec![0i64; k];
    for v in 0..n {
        coarse_total[coarse[v]] += net.strength[v];
    }
    let mut refined: Vec<usize> = (0..n).collect();
    let mut total: Vec<i64> = net.strength.clone();
    let mut size = vec![1usize; n];
    // weight from each refined community to the rest of its coarse community
    let mut external = vec![0i64; n];
    for v in 0..n {
        external[v] = net.adj[v].iter().filter(|&&(u, _)| coarse[u] == coarse[v]).map(|&(_, w)| w).sum();
    }
    let well_connected = |ext: i64, tot: i64, c: usize| scale.two_m_q * ext >= scale.p * tot * (coarse_total[c] - tot);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut link = vec![0i64; n];
    let mut touched = Vec::new();
    for &v in &order {
        let c = coarse[v];
        if size[refined[v]] != 1 || !well_connected(external[v], net.strength[v], c) {
            continue;
        }
        let s = net.strength[v];
        touched.clear();
        for &(u, w) in &net.adj[v] {
            if coarse[u] != c {
                continue;
            }
            let r = refined[u];
            if link[r] == 0 && !touched.contains(&r) {
                touched.push(r);
            }
            link[r] += w;
        }
        touched.sort_unstable();
        let own = refined[v];
        // (candidate, gain in objective units); staying has gain 0
        let mut candidates = vec![(own, 0i64)];
        for &r in &touched {
            if r == own || !well_connected(external[r], total[r], c) {
                continue;
            }
            let gain = 2 * (scale.two_m_q * link[r] - scale.p * s * total[r]);
            if gain >= 0 {
                candidates.push((r, gain));
            }
        }
        let weights: Vec<f64> = candidates
            .iter()
            .map(|&(_, gain)| (gain as f64 / scale.denominator as f64 / theta).exp())
            .collect();
        let target = pick(&candidates, &weights, rng);
        if target != own {
            external[target] += external[v] - 2 * link[target];
            total[target] += s;
            size[target] += 1;
            size[own] = 0;
            refined[v] = target;
        }
        for &r in &touched {
            link[r] = 0;
        }
    }
    canonicalize(&refined)
}

fn pick<R: Rng>(candidates: &[(usize, i64)], weights: &[f64], rng: &mut R) -> usize {
    let max = weights.iter().cloned().fold(f64::MIN, f64::max);
    if !max.is_finite() {
        // overflowed weights: take the best gain
        return candidates.iter().max_by_key(|&&(r, g)| (g, std::cmp::Reverse(r))).unwrap().0;
    }
    let sum: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * sum;
    for (&(r, _), &w) in candidates.iter().zip(weights) {
        if x < w {
            return r;
        }
        x -= w;
    }
    candidates.last().unwrap().0
}

use rand::seq::SliceRandom;
use rand::Rng;

use super::network::Network;
use super::HeuristicConfig;
use crate::error::Result;
use crate::graph::{canonicalize, Graph, Partition, Scale};

/// Multilevel Louvain from singletons.
pub fn louvain(g: &Graph, cfg: &HeuristicConfig) -> Result<Partition> {
    louvain_from(g, &Partition::singletons(g.n()), cfg)
}

/// Multilevel Louvain starting from `init`.
///
/// Returns `init` unchanged when no single-node move improves it.
pub fn louvain_from(g: &Graph, init: &Partition, cfg: &HeuristicConfig) -> Result<Partition> {
    run(g, init, cfg, None)
}

/// Outer passes re-run the hierarchy from the previous result until the
/// finest level makes no move. `trace` receives the objective after every
/// level.
pub(super) fn run(
    g: &Graph,
    init: &Partition,
    cfg: &HeuristicConfig,
    mut trace: Option<&mut Vec<i64>>,
) -> Result<Partition> {
    cfg.validate()?;
    init.check_size(g.n())?;
    let scale = Scale::new(g, &cfg.gamma)?;
    let mut rng = cfg.rng();
    let base = Network::from_graph(g);
    let mut current = init.clone();
    for _ in 0..cfg.max_passes {
        let mut net = base.clone();
        // level node holding each base node
        let mut membership: Vec<usize> = (0..g.n()).collect();
        let mut level_labels = current.labels().to_vec();
        let mut any_move = false;
        loop {
            let moved = local_move(&net, &mut level_labels, &scale, &mut rng);
            if !moved {
                break;
            }
            any_move = true;
            let compact = canonicalize(&level_labels);
            for c in membership.iter_mut() {
                *c = compact.label(*c);
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(base.objective(&membership, &scale));
            }
            if compact.k() == net.n() {
                break;
            }
            net = net.aggregate(compact.labels());
            level_labels = (0..net.n()).collect();
        }
        if !any_move {
            break;
        }
        current = canonicalize(&membership);
    }
    Ok(current)
}

/// Node-by-node sweeps in shuffled order until a sweep moves nothing.
///
/// Each node goes to the neighbouring community with the largest gain,
/// ties to the smallest label, and only on strict improvement. Labels
/// index `0..net.n()`. Returns whether any node moved.
pub(super) fn local_move<R: Rng>(net: &Network, labels: &mut [usize], scale: &Scale, rng: &mut R) -> bool {
    let n = net.n();
    let mut total = vec![0i64; n];
    for v in 0..n {
        total[labels[v]] += net.strength[v];
    }
    let mut link = vec![0i64; n];
    let mut touched = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
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
            // gain of joining c, up to a term common to all c
            let score = |c: usize| scale.two_m_q * link[c] - scale.p * s * total[c];
            let stay = score(own);
            let mut best = (stay, own);
            for &c in &touched {
                let sc = score(c);
                if sc > best.0 || (sc == best.0 && c < best.1 && sc > stay) {
                    best = (sc, c);
                }
            }
            for &c in &touched {
                link[c] = 0;
            }
            let target = if best.0 > stay { best.1 } else { own };
            total[target] += s;
            if target != own {
                labels[v] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    moved_any
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::graph::{modularity, ModularityParams};

    #[test]
    fn objective_never_decreases() {
        for g in random_suite(40) {
            let scale = Scale::new(&g, &ModularityParams::default()).unwrap();
            let mut trace = vec![Network::from_graph(&g).objective(&(0..g.n()).collect::<Vec<_>>(), &scale)];
            run(&g, &Partition::singletons(g.n()), &HeuristicConfig::default(), Some(&mut trace)).unwrap();
            assert!(trace.windows(2).all(|w| w[0] < w[1]), "{trace:?}");
        }
    }

    #[test]
    fn fixed_point_is_returned_unchanged() {
        let g = two_triangles();
        let cfg = HeuristicConfig::default();
        let x = louvain(&g, &cfg).unwrap();
        assert_eq!(louvain_from(&g, &x, &cfg).unwrap(), x);
        let split = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(x, split);
    }

    #[test]
    fn warm_start_never_loses() {
        let p = ModularityParams::default();
        for g in random_suite(40) {
            let init = Partition::from_labels(&(0..g.n()).map(|v| v % 2).collect::<Vec<_>>());
            let x = louvain_from(&g, &init, &HeuristicConfig::default()).unwrap();
            assert!(modularity(&g, &x, &p).unwrap() >= modularity(&g, &init, &p).unwrap());
        }
    }

    #[test]
    fn rejects_wrong_size_start() {
        let g = two_triangles();
        assert!(louvain_from(&g, &Partition::singletons(5), &HeuristicConfig::default()).is_err());
    }
}

use crate::graph::{canonicalize, Graph, Partition};

/// Integer-weighted undirected network used by the multilevel heuristics.
///
/// Node `v` of an aggregated network stands for a set of original nodes;
/// `self_weight[v]` is the ordered-pair adjacency sum inside that set and
/// `strength[v]` its total degree.
#[derive(Debug, Clone)]
pub(crate) struct Network {
    pub adj: Vec<Vec<(usize, i64)>>,
    pub self_weight: Vec<i64>,
    pub strength: Vec<i64>,
}

impl Network {
    pub fn from_graph(g: &Graph) -> Network {
        let adj = (0..g.n())
            .map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect())
            .collect();
        Network {
            adj,
            self_weight: vec![0; g.n()],
            strength: g.degrees().into_iter().map(|d| d as i64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community of `labels` (values `0..k`) into one node.
    pub fn aggregate(&self, labels: &[usize]) -> Network {
        let k = labels.iter().max().map_or(0, |&c| c + 1);
        let mut self_weight = vec![0; k];
        let mut strength = vec![0; k];
        let mut rows: Vec<std::collections::BTreeMap<usize, i64>> = vec![Default::default(); k];
        for v in 0..self.n() {
            let cv = labels[v];
            self_weight[cv] += self.self_weight[v];
            strength[cv] += self.strength[v];
            for &(u, w) in &self.adj[v] {
                let cu = labels[u];
                if cu == cv {
                    self_weight[cv] += w;
                } else {
                    *rows[cv].entry(cu).or_insert(0) += w;
                }
            }
        }
        Network {
            adj: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            self_weight,
            strength,
        }
    }

    /// Integer objective (modularity times `4 m^2 q`) of `labels`.
    pub fn objective(&self, labels: &[usize], scale: &crate::graph::Scale) -> i64 {
        let x = canonicalize(labels);
        let mut inner = vec![0i64; x.k()];
        let mut tot = vec![0i64; x.k()];
        for v in 0..self.n() {
            let c = x.label(v);
            inner[c] += self.self_weight[v];
            tot[c] += self.strength[v];
            for &(u, w) in &self.adj[v] {
                if x.label(u) == c {
                    inner[c] += w;
                }
            }
        }
        inner
            .iter()
            .zip(&tot)
            .map(|(&a, &d)| scale.two_m_q * a - scale.p * d * d)
            .sum()
    }
}

/// Splits every community that induces a disconnected subgraph into its
/// components. Never lowers modularity: no edges join the pieces.
pub(crate) fn split_disconnected(g: &Graph, x: &Partition) -> Partition {
    let n = g.n();
    let mut raw = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if raw[s] != usize::MAX {
            continue;
        }
        raw[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if raw[v] == usize::MAX && x.same_community(u, v) {
                    raw[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    canonicalize(&raw)
}

/// True when every community induces a connected subgraph.
pub fn communities_connected(g: &Graph, x: &Partition) -> bool {
    split_disconnected(g, x).k() == x.k()
}

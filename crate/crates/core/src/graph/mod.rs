//! Simple undirected graphs, partitions of their node sets, and exact
//! modularity.

mod modularity;
mod partition;

pub use modularity::{modularity, modularity_entry, ModularityMatrix, ModularityParams};
pub use partition::{canonicalize, Partition};
pub(crate) use modularity::{ratio_to_f64, Scale};

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simple, undirected, unweighted graph on nodes `0..n`.
///
/// Edges are stored once each as `(u, v)` with `u < v`, sorted. Every node
/// carries a label, which is the token it had in the source file (or its
/// decimal id when the graph was built programmatically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    dropped_self_loops: usize,
    dropped_duplicates: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops and repeated edges are dropped
    /// and counted.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Graph::build(labels, edges)
    }

    fn build<I>(labels: Vec<String>, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        let mut loops = 0;
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                loops += 1;
                continue;
            }
            list.push((u.min(v), u.max(v)));
        }
        let before = list.len();
        list.sort_unstable();
        list.dedup();
        let dups = before - list.len();
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: list,
            labels,
            dropped_self_loops: loops,
            dropped_duplicates: dups,
        })
    }

    /// Parses a whitespace-separated edge list. `#` starts a comment line and
    /// blank lines are skipped. Tokens are relabeled `0..n` in order of first
    /// appearance.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    found: tokens.len(),
                });
            }
            let u = intern(&mut ids, &mut labels, tokens[0]);
            let v = intern(&mut ids, &mut labels, tokens[1]);
            edges.push((u, v));
        }
        if labels.is_empty() {
            return Err(Error::EmptyInput);
        }
        Graph::build(labels, edges)
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sorted neighbor list of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// Source token of each node id.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn dropped_duplicates(&self) -> usize {
        self.dropped_duplicates
    }

    /// Canonical serialization: one `u v` line per edge with `u < v`, sorted,
    /// using internal ids.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `nodes` (which must be sorted and distinct),
    /// relabeled `0..nodes.len()` in the given order. Labels carry over.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]));
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        Graph::build(labels, edges).expect("induced ids are in range")
    }
}

impl Graph {
    /// Breadth-first numbering: roots in increasing id order, neighbours in
    /// increasing id order. Returns the new id of every node.
    ///
    /// Under this numbering the nodes appear in id order when the sorted
    /// edge list is scanned, so a graph without isolated nodes in this form
    /// survives [`Graph::to_edge_list`] and [`Graph::parse_edge_list`]
    /// unchanged.
    pub fn canonical_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut new_id = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if new_id[root] != usize::MAX {
                continue;
            }
            new_id[root] = order.len();
            order.push(root);
            let mut head = order.len() - 1;
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &v in &self.adj[u] {
                    if new_id[v] == usize::MAX {
                        new_id[v] = order.len();
                        order.push(v);
                    }
                }
            }
        }
        new_id
    }

    /// The graph renumbered by [`Graph::canonical_order`]; labels follow
    /// their nodes.
    pub fn canonical_form(&self) -> Graph {
        self.relabeled(&self.canonical_order())
    }

    /// Applies a permutation `new_id` of `0..n`.
    pub(crate) fn relabeled(&self, new_id: &[usize]) -> Graph {
        let mut labels = vec![String::new(); self.n()];
        for (v, &i) in new_id.iter().enumerate() {
            labels[i] = self.labels[v].clone();
        }
        let edges = self.edges.iter().map(|&(u, v)| (new_id[u], new_id[v]));
        Graph::build(labels, edges).expect("permuted ids are in range")
    }
}

fn intern<'a>(ids: &mut HashMap<&'a str, usize>, labels: &mut Vec<String>, tok: &'a str) -> usize {
    *ids.entry(tok).or_insert_with(|| {
        labels.push(tok.to_string());
        labels.len() - 1
    })
}

/// Largest connected component, relabeled `0..n'`, together with the
/// original id of each new node. Ties go to the component holding the
/// smallest node id.
pub fn giant_component(g: &Graph) -> (Graph, Vec<usize>) {
    let comps = g.components();
    // components() is ordered by smallest member, so the first maximum wins ties
    let mut best = 0;
    for (i, c) in comps.iter().enumerate() {
        if c.len() > comps[best].len() {
            best = i;
        }
    }
    let nodes = comps.into_iter().nth(best).unwrap_or_default();
    (g.induced(&nodes), nodes)
}

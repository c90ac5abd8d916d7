//! Depth-first branch and bound over pair decisions.
//!
//! A search node holds the must-link classes (as aggregated rows of the
//! modularity matrix) and the cannot-link relation between them. Branching
//! picks the undecided class pair with the largest aggregated weight and
//! tries "same" before "different".

use std::time::Instant;

use super::{SolveConfig, SolveResult, Termination, GAP_FLOOR};
use crate::graph::{ModularityMatrix, Partition};

const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
pub(crate) struct Node {
    members: Vec<Vec<usize>>,
    /// `r * r` aggregated weights between distinct classes.
    weight: Vec<i64>,
    apart: Vec<bool>,
    /// Objective already locked in by the must-link classes.
    fixed: i64,
    bound: i64,
}

impl Node {
    pub(crate) fn root(matrix: &ModularityMatrix) -> Node {
        let n = matrix.n();
        let mut weight = vec![0; n * n];
        let mut fixed = 0;
        for i in 0..n {
            fixed += matrix.get(i, i);
            for j in 0..n {
                if i != j {
                    weight[i * n + j] = matrix.get(i, j);
                }
            }
        }
        Node {
            members: (0..n).map(|i| vec![i]).collect(),
            weight,
            apart: vec![false; n * n],
            fixed,
            bound: UNBOUNDED,
        }
    }

    fn r(&self) -> usize {
        self.members.len()
    }

    #[inline]
    fn w(&self, a: usize, b: usize) -> i64 {
        self.weight[a * self.r() + b]
    }

    #[inline]
    fn is_apart(&self, a: usize, b: usize) -> bool {
        self.apart[a * self.r() + b]
    }

    /// Child with classes `a < b` joined. Classes stay ordered by smallest
    /// member because `a` already holds the smaller one.
    fn merged(&self, a: usize, b: usize) -> Node {
        let r = self.r();
        let keep: Vec<usize> = (0..r).filter(|&c| c != b).collect();
        let nr = r - 1;
        let mut weight = vec![0; nr * nr];
        let mut apart = vec![false; nr * nr];
        for (x, &cx) in keep.iter().enumerate() {
            for (y, &cy) in keep.iter().enumerate() {
                if x == y {
                    continue;
                }
                let mut w = self.w(cx, cy);
                let mut s = self.is_apart(cx, cy);
                if cx == a {
                    w += self.w(b, cy);
                    s |= self.is_apart(b, cy);
                } else if cy == a {
                    w += self.w(cx, b);
                    s |= self.is_apart(cx, b);
                }
                weight[x * nr + y] = w;
                apart[x * nr + y] = s;
            }
        }
        let mut members = self.members.clone();
        let moved = members.remove(b);
        members[a].extend(moved);
        members[a].sort_unstable();
        Node {
            members,
            weight,
            apart,
            fixed: self.fixed + 2 * self.w(a, b),
            bound: self.bound,
        }
    }

    fn separated(&self, a: usize, b: usize) -> Node {
        let mut child = self.clone();
        let r = self.r();
        child.apart[a * r + b] = true;
        child.apart[b * r + a] = true;
        child
    }

    /// Pair to branch on, or `None` when the node is a leaf: no undecided
    /// pair can still add to the objective (strictly, or also at zero when
    /// enumerating ties).
    fn branch_pair(&self, enumerate: bool) -> Option<(usize, usize)> {
        let r = self.r();
        let mut open = false;
        let mut best: Option<(i64, usize, usize)> = None;
        for a in 0..r {
            for b in a + 1..r {
                if self.is_apart(a, b) {
                    continue;
                }
                let w = self.w(a, b);
                if w > 0 || (enumerate && w == 0) {
                    open = true;
                }
                let mag = w.abs();
                if best.map_or(true, |(m, _, _)| mag > m) {
                    best = Some((mag, a, b));
                }
            }
        }
        if open {
            best.map(|(_, a, b)| (a, b))
        } else {
            None
        }
    }

    fn partition(&self, n: usize) -> Partition {
        Partition::from_communities(n, &self.members).expect("classes cover every node")
    }

    /// Upper bound on every completion of this node.
    ///
    /// Starts from `fixed + 2 * sum(positive undecided weights)` and
    /// subtracts a greedily packed multicommodity flow: every pair that
    /// would lose objective if joined (negative weight, or cannot-link with
    /// unlimited demand) routes flow along paths of positive undecided
    /// pairs. In any completion, each path either has a cut pair or forces
    /// its endpoints together, so each unit of flow is a unit of loss.
    /// Returns early once the value drops to `cutoff`.
    pub(crate) fn flow_bound(&self, cutoff: i64) -> i64 {
        let r = self.r();
        let mut cap = vec![0i64; r * r];
        let mut positive = 0i64;
        let mut demands: Vec<(usize, usize, i64)> = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                let w = self.w(a, b);
                if self.is_apart(a, b) {
                    demands.push((a, b, UNBOUNDED));
                } else if w > 0 {
                    positive += w;
                    cap[a * r + b] = w;
                    cap[b * r + a] = w;
                } else if w < 0 {
                    demands.push((a, b, -w));
                }
            }
        }
        let mut bound = self.fixed + 2 * positive;
        if bound <= cutoff || demands.is_empty() {
            return bound;
        }
        let mut remaining: Vec<i64> = demands.iter().map(|d| d.2).collect();

        // Two-hop paths first: they use the least capacity per unit routed.
        for (idx, &(s, t, _)) in demands.iter().enumerate() {
            let mut rem = remaining[idx];
            for k in 0..r {
                if rem == 0 {
                    break;
                }
                let (sk, kt) = (cap[s * r + k], cap[k * r + t]);
                if sk > 0 && kt > 0 {
                    let f = rem.min(sk).min(kt);
                    cap[s * r + k] -= f;
                    cap[k * r + s] -= f;
                    cap[k * r + t] -= f;
                    cap[t * r + k] -= f;
                    rem -= f;
                    bound -= 2 * f;
                }
            }
            remaining[idx] = rem;
            if bound <= cutoff {
                return bound;
            }
        }

        // Longer paths by breadth-first search on the residual pairs.
        let mut prev = vec![usize::MAX; r];
        let mut queue = Vec::with_capacity(r);
        for (idx, &(s, t, _)) in demands.iter().enumerate() {
            let mut rem = remaining[idx];
            while rem > 0 {
                prev.iter_mut().for_each(|p| *p = usize::MAX);
                prev[s] = s;
                queue.clear();
                queue.push(s);
                let mut head = 0;
                while head < queue.len() && prev[t] == usize::MAX {
                    let u = queue[head];
                    head += 1;
                    let row = &cap[u * r..(u + 1) * r];
                    for (v, &c) in row.iter().enumerate() {
                        if c > 0 && prev[v] == usize::MAX {
                            prev[v] = u;
                            queue.push(v);
                        }
                    }
                }
                if prev[t] == usize::MAX {
                    break;
                }
                let mut f = rem;
                let mut v = t;
                while v != s {
                    let u = prev[v];
                    f = f.min(cap[u * r + v]);
                    v = u;
                }
                let mut v = t;
                while v != s {
                    let u = prev[v];
                    cap[u * r + v] -= f;
                    cap[v * r + u] -= f;
                    v = u;
                }
                rem -= f;
                bound -= 2 * f;
                if bound <= cutoff {
                    return bound;
                }
            }
        }
        bound
    }
}

pub(crate) struct Search<'a> {
    matrix: &'a ModularityMatrix,
    cfg: &'a SolveConfig,
    best: i64,
    optima: Vec<Partition>,
    max_pruned: Option<i64>,
    nodes: u64,
}

impl<'a> Search<'a> {
    pub(crate) fn new(matrix: &'a ModularityMatrix, cfg: &'a SolveConfig, incumbent: (i64, Partition)) -> Self {
        Search {
            matrix,
            cfg,
            best: incumbent.0,
            optima: vec![incumbent.1],
            max_pruned: None,
            nodes: 0,
        }
    }

    /// Bounds at or below this value are pruned.
    fn threshold(&self) -> i64 {
        if self.cfg.enumerate_all {
            return self.best - 1;
        }
        let eps = self.cfg.tolerance;
        if eps == 0.0 {
            return self.best;
        }
        let denom = self.matrix.denominator() as f64;
        let best = self.best as f64;
        if best / denom > GAP_FLOOR {
            (best * (1.0 + eps)).floor() as i64
        } else {
            self.best + (eps * denom).floor() as i64
        }
    }

    fn prune(&mut self, bound: i64) -> bool {
        if bound <= self.threshold() {
            self.max_pruned = Some(self.max_pruned.map_or(bound, |m| m.max(bound)));
            true
        } else {
            false
        }
    }

    fn offer(&mut self, value: i64, node: &Node) {
        let n = self.matrix.n();
        if value > self.best {
            self.best = value;
            self.optima.clear();
            self.optima.push(node.partition(n));
        } else if value == self.best && self.cfg.enumerate_all {
            let x = node.partition(n);
            if !self.optima.contains(&x) {
                self.optima.push(x);
            }
        }
    }

    pub(crate) fn run(mut self, start: Instant) -> SolveResult {
        let enumerate = self.cfg.enumerate_all;
        let mut root = Node::root(self.matrix);
        root.bound = root.flow_bound(i64::MIN);
        let mut stack = vec![root];
        let mut stopped = None;

        while let Some(node) = stack.pop() {
            if let Some(limit) = self.cfg.node_limit {
                if self.nodes >= limit {
                    stack.push(node);
                    stopped = Some(Termination::NodeLimit);
                    break;
                }
            }
            if let Some(limit) = self.cfg.time_limit {
                if self.nodes % 128 == 0 && start.elapsed() >= limit {
                    stack.push(node);
                    stopped = Some(Termination::TimeLimit);
                    break;
                }
            }
            self.nodes += 1;
            if self.prune(node.bound) {
                continue;
            }
            let Some((a, b)) = node.branch_pair(enumerate) else {
                self.offer(node.fixed, &node);
                continue;
            };
            let same = node.merged(a, b);
            let apart = node.separated(a, b);
            // pushed last, explored first
            for mut child in [apart, same] {
                let cutoff = self.threshold();
                child.bound = child.flow_bound(cutoff).min(node.bound);
                if !self.prune(child.bound) {
                    stack.push(child);
                }
            }
        }

        let mut ub = self.best;
        if let Some(m) = self.max_pruned {
            ub = ub.max(m);
        }
        for node in &stack {
            ub = ub.max(node.bound);
        }
        let complete = stopped.is_none();
        let proven = complete && ub == self.best;
        let termination = match stopped {
            Some(t) => t,
            None if proven => Termination::Optimal,
            None => Termination::WithinTolerance,
        };
        let mut optima = self.optima;
        optima.sort();
        let q_lb = self.matrix.to_modularity(self.best);
        let q_ub = self.matrix.to_modularity(ub);
        SolveResult {
            gap: super::gap(q_lb, q_ub),
            optima,
            q_lb,
            q_ub,
            proven_optimal: proven,
            enumeration_complete: complete && enumerate,
            nodes_explored: self.nodes,
            elapsed: start.elapsed(),
            termination,
        }
    }
}

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{ModularityMatrix, Partition};

/// Decision status of a node pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    Same,
    Different,
    Undecided,
}

/// Must-link / cannot-link decisions over node pairs.
///
/// Must-link classes live in a disjoint-set forest whose roots are always the
/// smallest member, so closure under transitivity is automatic. Cannot-link
/// facts are stored between roots and follow them through merges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDecisionState {
    parent: Vec<usize>,
    apart: BTreeSet<(usize, usize)>,
}

impl PairDecisionState {
    /// Nothing decided.
    pub fn new(n: usize) -> Self {
        PairDecisionState {
            parent: (0..n).collect(),
            apart: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    pub fn status(&self, i: usize, j: usize) -> PairStatus {
        let (a, b) = (self.find(i), self.find(j));
        if a == b {
            PairStatus::Same
        } else if self.apart.contains(&(a.min(b), a.max(b))) {
            PairStatus::Different
        } else {
            PairStatus::Undecided
        }
    }

    /// Puts `i` and `j` in the same community, joining their classes.
    pub fn merge(&mut self, i: usize, j: usize) -> Result<()> {
        let (a, b) = (self.find(i), self.find(j));
        if a == b {
            return Ok(());
        }
        let (keep, gone) = (a.min(b), a.max(b));
        if self.apart.contains(&(keep, gone)) {
            return Err(Error::InconsistentState(format!(
                "nodes {i} and {j} are already separated"
            )));
        }
        self.parent[gone] = keep;
        let moved: Vec<(usize, usize)> = self
            .apart
            .iter()
            .copied()
            .filter(|&(x, y)| x == gone || y == gone)
            .collect();
        for (x, y) in moved {
            self.apart.remove(&(x, y));
            let other = if x == gone { y } else { x };
            self.apart.insert((other.min(keep), other.max(keep)));
        }
        Ok(())
    }

    /// Forbids `i` and `j` from sharing a community.
    pub fn separate(&mut self, i: usize, j: usize) -> Result<()> {
        let (a, b) = (self.find(i), self.find(j));
        if a == b {
            return Err(Error::InconsistentState(format!(
                "nodes {i} and {j} are already joined"
            )));
        }
        self.apart.insert((a.min(b), a.max(b)));
        Ok(())
    }

    /// Checks the internal invariants.
    pub fn check(&self) -> Result<()> {
        for &(a, b) in &self.apart {
            if a >= b || self.parent[a] != a || self.parent[b] != b {
                return Err(Error::InconsistentState(format!(
                    "cannot-link ({a}, {b}) is not between distinct roots"
                )));
            }
        }
        Ok(())
    }

    /// Partition given by the must-link classes.
    pub fn classes(&self) -> Partition {
        let roots: Vec<usize> = (0..self.n()).map(|i| self.find(i)).collect();
        Partition::from_labels(&roots)
    }

    /// True once every pair is either joined or separated.
    pub fn is_complete(&self) -> bool {
        let roots: BTreeSet<usize> = (0..self.n()).map(|i| self.find(i)).collect();
        let r = roots.len();
        self.apart.len() == r * (r - 1) / 2
    }
}

/// Admissible upper bound on the modularity of any completion of `state`:
/// `(1/2m) [sum_i b_ii + sum_{same i<j} 2 b_ij + sum_{undecided i<j} 2 max(b_ij, 0)]`.
///
/// Exact on fully decided states.
pub fn upper_bound(matrix: &ModularityMatrix, state: &PairDecisionState) -> Result<Ratio<i64>> {
    state.check()?;
    if state.n() != matrix.n() {
        return Err(Error::SizeMismatch {
            partition: state.n(),
            graph: matrix.n(),
        });
    }
    let n = matrix.n();
    let roots: Vec<usize> = (0..n).map(|i| state.find(i)).collect();
    let mut total = 0i64;
    for i in 0..n {
        total += matrix.get(i, i);
        for j in i + 1..n {
            let b = matrix.get(i, j);
            if roots[i] == roots[j] {
                total += 2 * b;
            } else if !state.apart.contains(&(roots[i].min(roots[j]), roots[i].max(roots[j]))) {
                total += 2 * b.max(0);
            }
        }
    }
    Ok(matrix.to_modularity(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{modularity, Graph, ModularityParams};
    use proptest::prelude::*;

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn merge_and_separate() {
        let mut s = PairDecisionState::new(4);
        s.merge(0, 1).unwrap();
        s.separate(1, 2).unwrap();
        assert_eq!(s.status(0, 2), PairStatus::Different);
        assert_eq!(s.status(0, 1), PairStatus::Same);
        assert_eq!(s.status(2, 3), PairStatus::Undecided);
        assert!(s.merge(0, 2).is_err());
        assert!(s.separate(1, 0).is_err());
        s.merge(2, 3).unwrap();
        assert_eq!(s.status(1, 3), PairStatus::Different);
        assert!(s.is_complete());
        assert_eq!(s.classes().labels(), [0, 0, 1, 1]);
    }

    #[test]
    fn bound_on_k3_root() {
        let p = ModularityParams::default();
        let m = ModularityMatrix::new(&k3(), &p).unwrap();
        assert_eq!(upper_bound(&m, &PairDecisionState::new(3)).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn bound_on_two_triangles_root() {
        let g = Graph::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
        let m = ModularityMatrix::new(&g, &ModularityParams::default()).unwrap();
        assert!(upper_bound(&m, &PairDecisionState::new(6)).unwrap() >= Ratio::new(1, 2));
    }

    #[test]
    fn bound_is_exact_when_decided() {
        let g = Graph::parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3\n").unwrap();
        let p = ModularityParams::default();
        let m = ModularityMatrix::new(&g, &p).unwrap();
        let mut s = PairDecisionState::new(6);
        for (i, j) in [(0, 1), (1, 2), (3, 4), (4, 5)] {
            s.merge(i, j).unwrap();
        }
        s.separate(0, 3).unwrap();
        assert!(s.is_complete());
        assert_eq!(upper_bound(&m, &s).unwrap(), modularity(&g, &s.classes(), &p).unwrap());
    }

    #[derive(Debug, Clone)]
    enum Step {
        Merge(usize, usize),
        Separate(usize, usize),
    }

    fn steps(n: usize) -> impl Strategy<Value = Vec<Step>> {
        prop::collection::vec(
            (any::<bool>(), 0..n, 0..n).prop_map(|(m, i, j)| if m { Step::Merge(i, j) } else { Step::Separate(i, j) }),
            0..30,
        )
    }

    proptest! {
        #[test]
        fn decisions_stay_transitive_and_consistent(steps in steps(7)) {
            let mut s = PairDecisionState::new(7);
            for step in steps {
                let _ = match step {
                    Step::Merge(i, j) => s.merge(i, j),
                    Step::Separate(i, j) => s.separate(i, j),
                };
                prop_assert!(s.check().is_ok());
            }
            for i in 0..7 {
                for j in 0..7 {
                    for k in 0..7 {
                        if s.status(i, j) == PairStatus::Same && s.status(j, k) == PairStatus::Same {
                            prop_assert_eq!(s.status(i, k), PairStatus::Same);
                        }
                        if s.status(i, j) == PairStatus::Same && s.status(j, k) == PairStatus::Different {
                            prop_assert_eq!(s.status(i, k), PairStatus::Different);
                        }
                    }
                }
            }
        }

        #[test]
        fn bound_never_increases_along_a_path(
            pairs in prop::collection::vec((0usize..7, 0usize..7), 1..20),
            steps in steps(7),
        ) {
            let g = Graph::from_edges(7, pairs).unwrap();
            prop_assume!(g.m() > 0);
            let m = ModularityMatrix::new(&g, &ModularityParams::default()).unwrap();
            let mut s = PairDecisionState::new(7);
            let mut last = upper_bound(&m, &s).unwrap();
            for step in steps {
                let _ = match step {
                    Step::Merge(i, j) => s.merge(i, j),
                    Step::Separate(i, j) => s.separate(i, j),
                };
                let now = upper_bound(&m, &s).unwrap();
                prop_assert!(now <= last);
                last = now;
            }
        }
    }
}

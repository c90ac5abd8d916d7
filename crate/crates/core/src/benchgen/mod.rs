//! Seeded planted-partition graphs ("abcdlite").
//!
//! Community sizes and degrees follow truncated discrete power laws; each
//! node's stubs are split into an intra-community share `1 - mu` and an
//! inter-community share `mu`, then wired by configuration-model matching.
//! The parameter vocabulary follows LFR/ABCD but the edge distribution is
//! not compatible with either reference generator.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{modularity, Graph, ModularityParams, Partition};

/// Name recorded for instances from this generator.
pub const GENERATOR_NAME: &str = "abcdlite";

/// Reshuffle rounds for stubs rejected as self-loops or duplicates.
pub const MATCHING_ROUNDS: usize = 50;

/// Generation fails when more than this fraction of stubs stays unmatched.
pub const MAX_STUB_LOSS: f64 = 0.5;

/// Parameters of one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub n: usize,
    /// Degree power-law exponent.
    #[serde(default = "default_tau1")]
    pub tau1: f64,
    /// Community-size power-law exponent.
    #[serde(default = "default_tau2")]
    pub tau2: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub k_min: usize,
    pub k_max: usize,
    /// Fraction of each node's stubs that leave its community.
    pub mu: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_tau1() -> f64 {
    3.0
}

fn default_tau2() -> f64 {
    1.5
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !(1 <= self.d_min && self.d_min <= self.d_max && self.d_max < self.n) {
            return bad(format!(
                "need 1 <= d_min <= d_max < n, got d_min={}, d_max={}, n={}",
                self.d_min, self.d_max, self.n
            ));
        }
        if !(1 <= self.k_min && self.k_min <= self.k_max && self.k_max <= self.n) {
            return bad(format!(
                "need 1 <= k_min <= k_max <= n, got k_min={}, k_max={}, n={}",
                self.k_min, self.k_max, self.n
            ));
        }
        if !(self.tau1 > 1.0 && self.tau2 > 1.0) {
            return bad(format!("exponents must exceed 1, got tau1={}, tau2={}", self.tau1, self.tau2));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return bad(format!("mu must lie in [0, 1), got {}", self.mu));
        }
        Ok(())
    }
}

/// Counters describing what generation had to give up or repair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GenerationStats {
    /// Stubs left unmatched after all reshuffle rounds.
    pub dropped_stubs: usize,
    /// Intra stubs moved to the inter share because a community was too
    /// small to hold them.
    pub capped_intra_stubs: usize,
    /// Nodes that ended with no edges and were attached inside their
    /// community.
    pub repaired_isolated: usize,
}

/// A generated graph with the partition it was planted from.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGraph {
    graph: Graph,
    planted: Partition,
    stats: GenerationStats,
}

impl PlantedGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn planted(&self) -> &Partition {
        &self.planted
    }

    pub fn stats(&self) -> &GenerationStats {
        &self.stats
    }

    /// Fraction of edges whose endpoints lie in different planted
    /// communities.
    pub fn inter_fraction(&self) -> f64 {
        let inter = self
            .graph
            .edges()
            .iter()
            .filter(|&&(u, v)| !self.planted.same_community(u, v))
            .count();
        inter as f64 / self.graph.m() as f64
    }

    /// Metadata written beside the edge list.
    pub fn sidecar(&self, spec: &BenchmarkSpec) -> Sidecar {
        Sidecar {
            schema_version: "1".into(),
            generator: GENERATOR_NAME.into(),
            spec: spec.clone(),
            m: self.graph.m(),
            inter_fraction: self.inter_fraction(),
            stats: self.stats.clone(),
            planted: self.planted.labels().to_vec(),
        }
    }
}

/// JSON sidecar of a generated instance.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub schema_version: String,
    pub generator: String,
    pub spec: BenchmarkSpec,
    pub m: usize,
    pub inter_fraction: f64,
    pub stats: GenerationStats,
    pub planted: Vec<usize>,
}

/// Modularity of the planted partition.
pub fn planted_quality(pg: &PlantedGraph, p: &ModularityParams) -> f64 {
    let q = modularity(&pg.graph, &pg.planted, p).expect("generated graphs have edges and matching partitions");
    crate::graph::ratio_to_f64(q)
}

/// Generates one instance. Deterministic in `spec` (including its seed).
///
/// Nodes are numbered breadth-first (see [`Graph::canonical_order`]), so
/// writing the graph as an edge list and reading it back reproduces it.
pub fn generate(spec: &BenchmarkSpec) -> Result<PlantedGraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = community_sizes(spec, &mut rng)?;
    let mut community = Vec::with_capacity(spec.n);
    for (c, &s) in sizes.iter().enumerate() {
        community.extend(std::iter::repeat(c).take(s));
    }
    let degree_law = PowerLaw::new(spec.d_min, spec.d_max, spec.tau1);
    let degrees: Vec<usize> = (0..spec.n).map(|_| degree_law.sample(&mut rng)).collect();

    let mut stats = GenerationStats::default();
    let mut intra = vec![0usize; spec.n];
    let mut inter = vec![0usize; spec.n];
    for v in 0..spec.n {
        let share = (1.0 - spec.mu) * degrees[v] as f64;
        let mut k = share.floor() as usize;
        if rng.gen::<f64>() < share - share.floor() {
            k += 1;
        }
        let room = sizes[community[v]] - 1;
        if k > room {
            stats.capped_intra_stubs += k - room;
            k = room;
        }
        intra[v] = k;
        inter[v] = degrees[v] - k;
    }
    // every stub pool needs an even total
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for v in 0..spec.n {
        members[community[v]].push(v);
    }
    for group in &members {
        if group.iter().map(|&v| intra[v]).sum::<usize>() % 2 == 1 {
            let &v = group.iter().max_by_key(|&&v| (intra[v], std::cmp::Reverse(v))).expect("odd sum has a stub");
            intra[v] -= 1;
            inter[v] += 1;
        }
    }
    if inter.iter().sum::<usize>() % 2 == 1 {
        let v = (0..spec.n).max_by_key(|&v| (inter[v], std::cmp::Reverse(v))).expect("odd sum has a stub");
        inter[v] -= 1;
        stats.dropped_stubs += 1;
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let total_stubs: usize = degrees.iter().sum();
    for group in &members {
        let stubs: Vec<usize> = group.iter().flat_map(|&v| std::iter::repeat(v).take(intra[v])).collect();
        stats.dropped_stubs += match_stubs(stubs, &mut edges, &mut rng, |_, _| true);
    }
    let stubs: Vec<usize> = (0..spec.n).flat_map(|v| std::iter::repeat(v).take(inter[v])).collect();
    stats.dropped_stubs += match_stubs(stubs, &mut edges, &mut rng, |u, v| community[u] != community[v]);
    if stats.dropped_stubs as f64 > MAX_STUB_LOSS * total_stubs as f64 {
        return Err(Error::Generation {
            stage: "stub matching",
            reason: format!(
                "{} of {} stubs unmatched after {} rounds",
                stats.dropped_stubs, total_stubs, MATCHING_ROUNDS
            ),
        });
    }

    repair_isolated(spec, &members, &community, &mut edges, &mut stats, &mut rng)?;
    Ok(relabel(spec.n, &edges, &community, stats))
}

/// Sizes sum to `n`, each within `[k_min, k_max]`.
fn community_sizes<R: Rng>(spec: &BenchmarkSpec, rng: &mut R) -> Result<Vec<usize>> {
    let law = PowerLaw::new(spec.k_min, spec.k_max, spec.tau2);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < spec.n {
        let s = law.sample(rng);
        sizes.push(s);
        total += s;
    }
    let excess = total - spec.n;
    let last = sizes.len() - 1;
    if sizes[last] - excess >= spec.k_min {
        sizes[last] -= excess;
        return Ok(sizes);
    }
    // drop the last community and spread its remaining nodes over the others
    let mut leftover = sizes.pop().expect("at least one size") - excess;
    let mut i = 0;
    let mut stalled = 0;
    while leftover > 0 && stalled < sizes.len() {
        let c = i % sizes.len().max(1);
        if sizes.is_empty() {
            break;
        }
        if sizes[c] < spec.k_max {
            sizes[c] += 1;
            leftover -= 1;
            stalled = 0;
        } else {
            stalled += 1;
        }
        i += 1;
    }
    if leftover > 0 {
        return Err(Error::Generation {
            stage: "community sizes",
            reason: format!(
                "cannot tile n = {} with sizes in [{}, {}]",
                spec.n, spec.k_min, spec.k_max
            ),
        });
    }
    Ok(sizes)
}

/// Pairs stubs uniformly at random; pairs that form self-loops, repeat an
/// edge or fail `allowed` are reshuffled for up to [`MATCHING_ROUNDS`]
/// rounds. Returns the number of stubs left unmatched.
fn match_stubs<R: Rng>(
    mut stubs: Vec<usize>,
    edges: &mut BTreeSet<(usize, usize)>,
    rng: &mut R,
    allowed: impl Fn(usize, usize) -> bool,
) -> usize {
    for _ in 0..MATCHING_ROUNDS {
        if stubs.len() < 2 {
            break;
        }
        stubs.shuffle(rng);
        let mut rejected = Vec::new();
        for pair in stubs.chunks(2) {
            let &[u, v] = pair else {
                rejected.extend_from_slice(pair);
                continue;
            };
            let key = (u.min(v), u.max(v));
            if u != v && allowed(u, v) && !edges.contains(&key) {
                edges.insert(key);
            } else {
                rejected.extend([u, v]);
            }
        }
        stubs = rejected;
    }
    stubs.len()
}

/// Attaches every edgeless node to a community member below `d_max`,
/// falling back to any such node.
fn repair_isolated<R: Rng>(
    spec: &BenchmarkSpec,
    members: &[Vec<usize>],
    community: &[usize],
    edges: &mut BTreeSet<(usize, usize)>,
    stats: &mut GenerationStats,
    rng: &mut R,
) -> Result<()> {
    let mut degree = vec![0usize; spec.n];
    for &(u, v) in edges.iter() {
        degree[u] += 1;
        degree[v] += 1;
    }
    for v in 0..spec.n {
        if degree[v] > 0 {
            continue;
        }
        let mut pool: Vec<usize> = members[community[v]]
            .iter()
            .copied()
            .filter(|&u| u != v && degree[u] < spec.d_max)
            .collect();
        if pool.is_empty() {
            pool = (0..spec.n).filter(|&u| u != v && degree[u] < spec.d_max).collect();
        }
        let Some(&u) = pool.choose(rng) else {
            return Err(Error::Generation {
                stage: "isolated-node repair",
                reason: format!("no partner below d_max = {} for node {v}", spec.d_max),
            });
        };
        edges.insert((u.min(v), u.max(v)));
        degree[u] += 1;
        degree[v] += 1;
        stats.repaired_isolated += 1;
    }
    Ok(())
}

/// Builds the graph in canonical breadth-first numbering.
fn relabel(n: usize, edges: &BTreeSet<(usize, usize)>, community: &[usize], stats: GenerationStats) -> PlantedGraph {
    let raw = Graph::from_edges(n, edges.iter().copied()).expect("stub ids are in range");
    let new_id = raw.canonical_order();
    let mut labels = vec![0; n];
    for v in 0..n {
        labels[new_id[v]] = community[v];
    }
    PlantedGraph {
        graph: Graph::from_edges(n, edges.iter().map(|&(u, v)| (new_id[u], new_id[v])))
            .expect("permuted ids are in range"),
        planted: Partition::from_labels(&labels),
        stats,
    }
}

/// Discrete power law `P(k) ~ k^-tau` on `[lo, hi]`, sampled by inverting
/// its CDF.
struct PowerLaw {
    lo: usize,
    cdf: Vec<f64>,
}

impl PowerLaw {
    fn new(lo: usize, hi: usize, tau: f64) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (lo..=hi)
            .map(|k| {
                acc += (k as f64).powf(-tau);
                acc
            })
            .collect();
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        PowerLaw { lo, cdf }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        self.lo + i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn spec(n: usize, mu: f64, seed: u64) -> BenchmarkSpec {
        BenchmarkSpec {
            n,
            tau1: 3.0,
            tau2: 1.5,
            d_min: 3,
            d_max: 10,
            k_min: 10,
            k_max: 25,
            mu,
            seed,
        }
    }

    #[test]
    fn validation() {
        assert!(spec(60, 0.2, 1).validate().is_ok());
        assert!(spec(60, 1.0, 1).validate().is_err());
        assert!(spec(60, -0.1, 1).validate().is_err());
        let mut s = spec(60, 0.2, 1);
        s.d_max = 60;
        assert!(s.validate().is_err());
        s = spec(60, 0.2, 1);
        s.k_min = 30;
        s.k_max = 20;
        assert!(s.validate().is_err());
        s = spec(60, 0.2, 1);
        s.tau1 = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn zero_mixing_is_all_intra() {
        let pg = generate(&spec(60, 0.0, 1)).unwrap();
        assert_eq!(pg.inter_fraction(), 0.0);
        assert!(planted_quality(&pg, &ModularityParams::default()) > 0.0);
        let sizes = pg.planted().sizes();
        assert!(sizes.iter().all(|&s| (10..=25).contains(&s)), "{sizes:?}");
        assert_eq!(sizes.iter().sum::<usize>(), 60);
    }

    #[test]
    fn deterministic() {
        let a = generate(&spec(80, 0.3, 9)).unwrap();
        let b = generate(&spec(80, 0.3, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.graph().to_edge_list(), b.graph().to_edge_list());
        assert_ne!(a.graph().edges(), generate(&spec(80, 0.3, 10)).unwrap().graph().edges());
    }

    #[test]
    fn serialization_round_trip_is_exact() {
        let pg = generate(&spec(70, 0.2, 4)).unwrap();
        let back = Graph::parse_edge_list(&pg.graph().to_edge_list()).unwrap();
        assert_eq!(back.edges(), pg.graph().edges());
        assert_eq!(back.n(), pg.graph().n());
    }

    #[test]
    fn degrees_within_bounds() {
        for seed in 0..10 {
            let pg = generate(&spec(100, 0.3, seed)).unwrap();
            for v in 0..pg.graph().n() {
                let d = pg.graph().degree(v);
                assert!((1..=10).contains(&d), "node {v} degree {d}");
            }
        }
    }

    #[test]
    fn mixing_tracks_mu() {
        for mu in [0.1, 0.3, 0.5] {
            let mut fractions = Vec::new();
            for seed in 0..10 {
                let mut s = spec(200, mu, seed);
                s.d_min = 3;
                s.d_max = 12;
                let pg = generate(&s).unwrap();
                assert!(pg.graph().m() >= 200);
                fractions.push(pg.inter_fraction());
            }
            let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
            assert!((mean - mu).abs() <= 0.05, "mu {mu}: realized {mean}");
        }
    }

    #[test]
    fn single_community_has_zero_quality() {
        let s = BenchmarkSpec {
            n: 20,
            tau1: 3.0,
            tau2: 1.5,
            d_min: 2,
            d_max: 6,
            k_min: 20,
            k_max: 20,
            mu: 0.2,
            seed: 3,
        };
        let pg = generate(&s).unwrap();
        assert_eq!(pg.planted().k(), 1);
        assert_eq!(planted_quality(&pg, &ModularityParams::default()), 0.0);
    }

    #[test]
    fn infeasible_tiling_errors() {
        let s = BenchmarkSpec {
            n: 25,
            tau1: 3.0,
            tau2: 1.5,
            d_min: 2,
            d_max: 6,
            k_min: 10,
            k_max: 12,
            mu: 0.2,
            seed: 0,
        };
        let err = generate(&s).unwrap_err();
        assert!(matches!(err, Error::Generation { stage: "community sizes", .. }), "{err}");
    }

    #[test]
    fn stronger_mixing_lowers_planted_quality() {
        let p = ModularityParams::default();
        for seed in 0..5 {
            let low = planted_quality(&generate(&spec(120, 0.01, seed)).unwrap(), &p);
            let high = planted_quality(&generate(&spec(120, 0.3, seed)).unwrap(), &p);
            assert!(high < low, "seed {seed}: {high} vs {low}");
        }
    }

    #[test]
    fn power_law_covers_range() {
        let law = PowerLaw::new(2, 6, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let samples: Vec<usize> = (0..2000).map(|_| law.sample(&mut rng)).collect();
        assert!(samples.iter().all(|&k| (2..=6).contains(&k)));
        let twos = samples.iter().filter(|&&k| k == 2).count();
        let sixes = samples.iter().filter(|&&k| k == 6).count();
        assert!(twos > sixes * 4);
    }
}

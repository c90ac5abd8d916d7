use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use super::{Graph, Partition};
use crate::error::{Error, Result};

/// Resolution parameter, held as an exact positive rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularityParams {
    gamma: Ratio<i64>,
}

impl Default for ModularityParams {
    fn default() -> Self {
        ModularityParams { gamma: Ratio::one() }
    }
}

impl ModularityParams {
    pub fn new(gamma: Ratio<i64>) -> Result<Self> {
        if gamma <= Ratio::zero() {
            return Err(Error::InvalidResolution(gamma.to_string()));
        }
        Ok(ModularityParams { gamma })
    }

    /// Parses `"1"`, `"0.75"` or `"3/2"` into an exact rational.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidResolution(text.to_string());
        let text = text.trim();
        let gamma = if let Some((num, den)) = text.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ratio::new(num, den)
        } else if let Some((whole, frac)) = text.split_once('.') {
            if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10i64.pow(frac.len() as u32);
            let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            Ratio::new(whole * den + frac, den)
        } else {
            Ratio::from_integer(text.parse().map_err(|_| bad())?)
        };
        ModularityParams::new(gamma)
    }

    pub fn gamma(&self) -> Ratio<i64> {
        self.gamma
    }
}

/// `b_ij = a_ij - gamma * d_i * d_j / 2m`, exactly.
pub fn modularity_entry(g: &Graph, p: &ModularityParams, i: usize, j: usize) -> Result<Ratio<i64>> {
    let n = g.n();
    for node in [i, j] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let a = i64::from(g.has_edge(i, j));
    let dd = (g.degree(i) * g.degree(j)) as i64;
    Ok(Ratio::from_integer(a) - p.gamma * Ratio::new(dd, 2 * g.m() as i64))
}

/// Modularity of `x` on `g`, including the diagonal terms, as an exact
/// rational.
pub fn modularity(g: &Graph, x: &Partition, p: &ModularityParams) -> Result<Ratio<i64>> {
    x.check_size(g.n())?;
    let scale = Scale::new(g, p)?;
    let mut internal = vec![0i64; x.k()];
    let mut degree_sum = vec![0i64; x.k()];
    for &(u, v) in g.edges() {
        if x.same_community(u, v) {
            internal[x.label(u)] += 2;
        }
    }
    for v in 0..g.n() {
        degree_sum[x.label(v)] += g.degree(v) as i64;
    }
    let num: i64 = internal
        .iter()
        .zip(&degree_sum)
        .map(|(&a, &d)| scale.two_m_q * a - scale.p * d * d)
        .sum();
    Ok(Ratio::new(num, scale.denominator))
}

/// Integer scaling shared by the exact routines: with `gamma = p/q`,
/// `b_ij * 2mq = 2mq * a_ij - p * d_i * d_j` is an integer and
/// `Q = sum_{i,j} (b_ij * 2mq) delta(i,j) / (4 m^2 q)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scale {
    pub two_m_q: i64,
    pub p: i64,
    pub denominator: i64,
}

impl Scale {
    pub fn new(g: &Graph, params: &ModularityParams) -> Result<Scale> {
        if g.m() == 0 {
            return Err(Error::NoEdges);
        }
        let m = g.m() as i64;
        let p = *params.gamma.numer();
        let q = *params.gamma.denom();
        Ok(Scale {
            two_m_q: 2 * m * q,
            p,
            denominator: 4 * m * m * q,
        })
    }
}

/// Dense modularity matrix in integer units (`b_ij * 2mq`).
///
/// Objective values produced from it are numerators over
/// [`ModularityMatrix::denominator`].
#[derive(Debug, Clone)]
pub struct ModularityMatrix {
    n: usize,
    entries: Vec<i64>,
    denominator: i64,
}

impl ModularityMatrix {
    pub fn new(g: &Graph, params: &ModularityParams) -> Result<Self> {
        let scale = Scale::new(g, params)?;
        let n = g.n();
        let deg: Vec<i64> = g.degrees().into_iter().map(|d| d as i64).collect();
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = -scale.p * deg[i] * deg[j];
            }
        }
        for &(u, v) in g.edges() {
            entries[u * n + v] += scale.two_m_q;
            entries[v * n + u] += scale.two_m_q;
        }
        Ok(ModularityMatrix {
            n,
            entries,
            denominator: scale.denominator,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Denominator turning integer objectives into modularity.
    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Integer objective of a partition: `sum_{i,j} entry(i,j) delta(i,j)`.
    pub fn objective(&self, x: &Partition) -> i64 {
        let mut total = 0;
        for i in 0..self.n {
            let row = self.row(i);
            for (j, &b) in row.iter().enumerate() {
                if x.label(i) == x.label(j) {
                    total += b;
                }
            }
        }
        total
    }

    pub fn to_modularity(&self, objective: i64) -> Ratio<i64> {
        Ratio::new(objective, self.denominator)
    }

    pub fn to_f64(&self, objective: i64) -> f64 {
        objective as f64 / self.denominator as f64
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

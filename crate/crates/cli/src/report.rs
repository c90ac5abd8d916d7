use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{csv_err, io_err, json_err, CliError, Result};
use crate::gen::write;
use crate::record::{EvalRecord, RECORD_HEADER};
use crate::run::{write_csv, NetworkRow, RunSummary, NETWORK_HEADER};

/// Quartile convention stated in `summary.json`.
pub const QUARTILE_METHOD: &str =
    "linear interpolation between closest ranks: q(p) = x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)]), h = (n - 1) p";

/// Whisker convention stated in `summary.json`.
pub const WHISKER_RULE: &str =
    "whiskers end at the most extreme data points within 1.5 IQR of the nearest hinge";

/// Number of log-spaced edge-count bins for solve times.
pub const TIME_BINS: usize = 4;

/// Name of the exact baseline in `time_bins.csv`.
pub const BASELINE_NAME: &str = "exact_baseline";

/// Five-number summary with 1.5 IQR whiskers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

/// Quantile `p` of sorted data by linear interpolation between closest
/// ranks.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl BoxStats {
    /// `None` for empty data.
    pub fn new(values: &[f64]) -> Option<BoxStats> {
        if values.is_empty() {
            return None;
        }
        let mut x = values.to_vec();
        x.sort_by(f64::total_cmp);
        let q1 = quantile(&x, 0.25);
        let q3 = quantile(&x, 0.75);
        let reach = 1.5 * (q3 - q1);
        let whisker_low = *x.iter().find(|&&v| v >= q1 - reach).expect("q1 lies within the data");
        let whisker_high = *x.iter().rev().find(|&&v| v <= q3 + reach).expect("q3 lies within the data");
        Some(BoxStats {
            count: x.len(),
            min: x[0],
            q1,
            median: quantile(&x, 0.5),
            q3,
            max: x[x.len() - 1],
            whisker_low,
            whisker_high,
        })
    }
}

/// Options of the `report` command.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// GOP at or above `1 - threshold` counts as a success. Defaults to the
    /// threshold in a sibling `run.json`, else 1e-9.
    pub success_threshold: Option<f64>,
    /// Algorithms averaged in the summary line; all when `None`.
    pub average_over: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRow {
    pub algorithm: String,
    pub evaluated: usize,
    pub successes: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub network: String,
    pub algorithm: String,
    pub seed: u64,
    pub gop: f64,
    pub ami: Option<f64>,
    pub rmi: Option<f64>,
    pub ecs: Option<f64>,
    pub suboptimal: bool,
    /// Similarity at or below GOP: above the 45-degree line when
    /// similarity is plotted on the horizontal axis.
    pub ami_above: Option<bool>,
    pub rmi_above: Option<bool>,
    pub ecs_above: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub algorithm: String,
    pub measure: String,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeBinRow {
    pub algorithm: String,
    pub bin: usize,
    pub m_low: f64,
    pub m_high: f64,
    pub count: usize,
    pub median_seconds: Option<f64>,
    pub q1_seconds: Option<f64>,
    pub q3_seconds: Option<f64>,
    pub whisker_low_seconds: Option<f64>,
    pub whisker_high_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Average {
    pub algorithms: Vec<String>,
    pub success_rate: Option<f64>,
}

/// Fractions of sub-optimal records at or below the 45-degree line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AboveFractions {
    pub ami: Option<f64>,
    pub rmi: Option<f64>,
    pub ecs: Option<f64>,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub schema_version: String,
    pub quartile_method: String,
    pub whisker_rule: String,
    pub success_threshold: f64,
    pub records: usize,
    pub suboptimal_records: usize,
    pub above_45_degree: AboveFractions,
    pub average: Average,
    pub success_rates: Vec<SuccessRow>,
    /// False when no `networks.csv` sat beside the records.
    pub time_bins_written: bool,
}

const SCATTER_HEADER: [&str; 11] = [
    "network",
    "algorithm",
    "seed",
    "gop",
    "ami",
    "rmi",
    "ecs",
    "suboptimal",
    "ami_above",
    "rmi_above",
    "ecs_above",
];
const SUCCESS_HEADER: [&str; 4] = ["algorithm", "evaluated", "successes", "success_rate"];
const DISTRIBUTION_HEADER: [&str; 10] = [
    "algorithm",
    "measure",
    "count",
    "min",
    "q1",
    "median",
    "q3",
    "max",
    "whisker_low",
    "whisker_high",
];
const TIME_BIN_HEADER: [&str; 10] = [
    "algorithm",
    "bin",
    "m_low",
    "m_high",
    "count",
    "median_seconds",
    "q1_seconds",
    "q3_seconds",
    "whisker_low_seconds",
    "whisker_high_seconds",
];

/// Reads a records CSV, requiring exactly the header `run` writes.
pub fn read_records(path: &Path) -> Result<Vec<EvalRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let found: Vec<&str> = header.iter().collect();
    if found != RECORD_HEADER {
        let missing: Vec<&str> = RECORD_HEADER.iter().copied().filter(|c| !found.contains(c)).collect();
        let reason = if missing.is_empty() {
            format!("unexpected header {found:?}")
        } else {
            format!("missing columns {missing:?}")
        };
        return Err(CliError::Schema {
            path: path.to_path_buf(),
            reason,
        });
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err(path))
}

fn read_networks(path: &Path) -> Result<Vec<NetworkRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    if header.iter().collect::<Vec<_>>() != NETWORK_HEADER {
        return Err(CliError::Schema {
            path: path.to_path_buf(),
            reason: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err(path))
}

/// Success rate per algorithm over records with a defined GOP, in
/// algorithm order.
pub fn success_rates(records: &[EvalRecord], threshold: f64) -> Vec<SuccessRow> {
    let mut by_alg: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in records {
        let entry = by_alg.entry(&r.algorithm).or_default();
        if let Some(g) = r.gop {
            entry.0 += 1;
            if g >= 1.0 - threshold {
                entry.1 += 1;
            }
        }
    }
    by_alg
        .into_iter()
        .map(|(a, (evaluated, successes))| SuccessRow {
            algorithm: a.to_string(),
            evaluated,
            successes,
            success_rate: if evaluated == 0 { 0.0 } else { successes as f64 / evaluated as f64 },
        })
        .collect()
}

/// Arithmetic mean of the success rates of `algorithms` (all when `None`).
pub fn average_success(rates: &[SuccessRow], algorithms: Option<&[String]>) -> Average {
    let chosen: Vec<&SuccessRow> = rates
        .iter()
        .filter(|r| r.evaluated > 0 && algorithms.map_or(true, |a| a.contains(&r.algorithm)))
        .collect();
    Average {
        algorithms: chosen.iter().map(|r| r.algorithm.clone()).collect(),
        success_rate: (!chosen.is_empty())
            .then(|| chosen.iter().map(|r| r.success_rate).sum::<f64>() / chosen.len() as f64),
    }
}

/// One scatter point per record with a defined GOP.
pub fn scatter(records: &[EvalRecord], threshold: f64) -> Vec<ScatterRow> {
    records
        .iter()
        .filter_map(|r| {
            let gop = r.gop?;
            let above = |s: Option<f64>| s.map(|s| s <= gop);
            Some(ScatterRow {
                network: r.network.clone(),
                algorithm: r.algorithm.clone(),
                seed: r.seed,
                gop,
                ami: r.ami,
                rmi: r.rmi,
                ecs: r.ecs,
                suboptimal: gop < 1.0 - threshold,
                ami_above: above(r.ami),
                rmi_above: above(r.rmi),
                ecs_above: above(r.ecs),
            })
        })
        .collect()
}

/// Fraction of sub-optimal points at or below the 45-degree line, per
/// measure; `None` when no sub-optimal point defines that measure.
pub fn above_fractions(points: &[ScatterRow]) -> AboveFractions {
    let frac = |pick: fn(&ScatterRow) -> Option<bool>| {
        let flags: Vec<bool> = points.iter().filter(|p| p.suboptimal).filter_map(pick).collect();
        (!flags.is_empty()).then(|| flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64)
    };
    AboveFractions {
        ami: frac(|p| p.ami_above),
        rmi: frac(|p| p.rmi_above),
        ecs: frac(|p| p.ecs_above),
    }
}

/// Box statistics of GOP, AMI, RMI and ECS per algorithm.
pub fn distributions(records: &[EvalRecord]) -> Vec<DistributionRow> {
    let mut by_alg: BTreeMap<&str, Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        by_alg.entry(&r.algorithm).or_default().push(r);
    }
    type Pick = fn(&EvalRecord) -> Option<f64>;
    let measures: [(&str, Pick); 4] = [
        ("gop", |r| r.gop),
        ("ami", |r| r.ami),
        ("rmi", |r| r.rmi),
        ("ecs", |r| r.ecs),
    ];
    let mut out = Vec::new();
    for (alg, recs) in by_alg {
        for (name, pick) in measures {
            let values: Vec<f64> = recs.iter().filter_map(|r| pick(r)).collect();
            if let Some(s) = BoxStats::new(&values) {
                out.push(DistributionRow {
                    algorithm: alg.to_string(),
                    measure: name.to_string(),
                    count: s.count,
                    min: s.min,
                    q1: s.q1,
                    median: s.median,
                    q3: s.q3,
                    max: s.max,
                    whisker_low: s.whisker_low,
                    whisker_high: s.whisker_high,
                });
            }
        }
    }
    out
}

/// Bin edges `lo * (hi / lo)^(i / TIME_BINS)` over the positive edge
/// counts.
pub fn bin_edges(lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut edges: Vec<f64> = (0..=TIME_BINS)
        .map(|i| (a + (b - a) * i as f64 / TIME_BINS as f64).exp())
        .collect();
    edges[0] = lo;
    edges[TIME_BINS] = hi;
    edges
}

fn bin_of(m: f64, lo: f64, hi: f64) -> usize {
    if hi <= lo {
        return 0;
    }
    let t = (m.ln() - lo.ln()) / (hi.ln() - lo.ln());
    ((t * TIME_BINS as f64).floor() as usize).min(TIME_BINS - 1)
}

/// Solve-time statistics per algorithm and log-spaced edge-count bin. The
/// exact baseline appears as [`BASELINE_NAME`].
pub fn time_bins(records: &[EvalRecord], networks: &[NetworkRow]) -> Vec<TimeBinRow> {
    let edges: HashMap<&str, f64> = networks
        .iter()
        .filter_map(|n| Some((n.network.as_str(), n.m? as f64)))
        .filter(|&(_, m)| m > 0.0)
        .collect();
    if edges.is_empty() {
        return Vec::new();
    }
    let lo = edges.values().copied().fold(f64::INFINITY, f64::min);
    let hi = edges.values().copied().fold(0.0, f64::max);
    let bounds = bin_edges(lo, hi);
    let mut samples: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    let mut add = |alg: &str, m: f64, t: f64| {
        samples.entry(alg.to_string()).or_insert_with(|| vec![Vec::new(); TIME_BINS])[bin_of(m, lo, hi)].push(t);
    };
    for r in records {
        if let Some(&m) = edges.get(r.network.as_str()) {
            add(&r.algorithm, m, r.solve_seconds);
        }
    }
    for n in networks {
        if let (Some(&m), Some(t)) = (edges.get(n.network.as_str()), n.exact_seconds) {
            add(BASELINE_NAME, m, t);
        }
    }
    let mut out = Vec::new();
    for (alg, bins) in samples {
        for (bin, values) in bins.iter().enumerate() {
            let s = BoxStats::new(values);
            out.push(TimeBinRow {
                algorithm: alg.clone(),
                bin,
                m_low: bounds[bin],
                m_high: bounds[bin + 1],
                count: values.len(),
                median_seconds: s.map(|s| s.median),
                q1_seconds: s.map(|s| s.q1),
                q3_seconds: s.map(|s| s.q3),
                whisker_low_seconds: s.map(|s| s.whisker_low),
                whisker_high_seconds: s.map(|s| s.whisker_high),
            });
        }
    }
    out
}

/// Reads `records_path` (and a sibling `networks.csv` when present) and
/// writes the summary artifacts into `out_dir`.
pub fn cmd_report(records_path: &Path, out_dir: &Path, opts: &ReportOptions) -> Result<ReportSummary> {
    let records = read_records(records_path)?;
    if records.is_empty() {
        return Err(CliError::Schema {
            path: records_path.to_path_buf(),
            reason: "no records".into(),
        });
    }
    let dir = records_path.parent().unwrap_or(Path::new("."));
    let threshold = match opts.success_threshold {
        Some(t) => t,
        None => {
            let run = dir.join("run.json");
            if run.exists() {
                let text = std::fs::read_to_string(&run).map_err(io_err(&run))?;
                serde_json::from_str::<RunSummary>(&text).map_err(json_err(&run))?.success_threshold
            } else {
                modmax::metrics::GOP_GUARD
            }
        }
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let rates = success_rates(&records, threshold);
    write_csv(&out_dir.join("success_rates.csv"), &SUCCESS_HEADER, &rates)?;
    let points = scatter(&records, threshold);
    write_csv(&out_dir.join("scatter.csv"), &SCATTER_HEADER, &points)?;
    write_csv(&out_dir.join("distributions.csv"), &DISTRIBUTION_HEADER, &distributions(&records))?;

    let networks_path = dir.join("networks.csv");
    let time_bins_written = networks_path.exists();
    if time_bins_written {
        let networks = read_networks(&networks_path)?;
        write_csv(&out_dir.join("time_bins.csv"), &TIME_BIN_HEADER, &time_bins(&records, &networks))?;
    }

    let summary = ReportSummary {
        schema_version: "1".into(),
        quartile_method: QUARTILE_METHOD.into(),
        whisker_rule: WHISKER_RULE.into(),
        success_threshold: threshold,
        records: records.len(),
        suboptimal_records: points.iter().filter(|p| p.suboptimal).count(),
        above_45_degree: above_fractions(&points),
        average: average_success(&rates, opts.average_over.as_deref()),
        success_rates: rates,
        time_bins_written,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
    write(&out_dir.join("summary.json"), json + "\n")?;
    Ok(summary)
}

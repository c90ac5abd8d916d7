use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use modmax::benchgen::{generate, BenchmarkSpec};
use modmax::exact::{enumerate_optima, SolveConfig};
use modmax::graph::{giant_component, Graph, ModularityParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithm::{run_algorithm, AlgorithmId, Outcome};
use crate::error::{csv_err, io_err, json_err, CliError, Result};
use crate::gen::{instance_name, write};
use crate::record::{score, to_f64, Baseline, EvalRecord, RECORD_HEADER};

/// Limits of the exact baseline stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverLimits {
    pub time_limit_seconds: Option<f64>,
    pub node_limit: Option<u64>,
}

/// An evaluation run, read from JSON.
///
/// Network paths are relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub networks: Vec<PathBuf>,
    /// Instances generated in memory, named as `gen` names them.
    #[serde(default)]
    pub generate: Vec<BenchmarkSpec>,
    pub algorithms: Vec<String>,
    #[serde(default = "default_gamma")]
    pub gamma: String,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Keep only the best seed per (network, algorithm); ties go to the
    /// first seed listed.
    #[serde(default)]
    pub best_of_seeds: bool,
    #[serde(default)]
    pub solver: SolverLimits,
    /// Evaluate the largest connected component only.
    #[serde(default)]
    pub giant_component: bool,
    #[serde(default = "default_threshold")]
    pub success_threshold: f64,
    /// When false every time column is written as 0, so reruns are
    /// byte-identical.
    #[serde(default = "yes")]
    pub record_timing: bool,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn default_gamma() -> String {
    "1".into()
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_threshold() -> f64 {
    modmax::metrics::GOP_GUARD
}

fn yes() -> bool {
    true
}

impl RunConfig {
    pub fn from_json(text: &str) -> serde_json::Result<RunConfig> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.networks.is_empty() && self.generate.is_empty() {
            return Err(CliError::Config("no networks".into()));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Config("no algorithms".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("no seeds".into()));
        }
        for a in &self.algorithms {
            a.parse::<AlgorithmId>()?;
        }
        ModularityParams::parse(&self.gamma)?;
        if !(0.0..1.0).contains(&self.success_threshold) {
            return Err(CliError::Config(format!(
                "success_threshold must lie in [0, 1), got {}",
                self.success_threshold
            )));
        }
        if let Some(t) = self.solver.time_limit_seconds {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("time_limit_seconds must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            time_limit: self.solver.time_limit_seconds.map(Duration::from_secs_f64),
            node_limit: self.solver.node_limit,
            ..SolveConfig::enumerate()
        }
    }
}

/// Column order of `networks.csv`.
pub const NETWORK_HEADER: [&str; 10] = [
    "network",
    "n",
    "m",
    "q_star",
    "q_star_exact",
    "optima_count",
    "proven",
    "exact_seconds",
    "nodes_explored",
    "error",
];

/// Per-network summary written to `networks.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub network: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub q_star: Option<f64>,
    pub q_star_exact: Option<String>,
    pub optima_count: Option<usize>,
    pub proven: bool,
    pub exact_seconds: Option<f64>,
    pub nodes_explored: Option<u64>,
    pub error: Option<String>,
}

/// Everything `run` produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<EvalRecord>,
    pub networks: Vec<NetworkRow>,
}

#[derive(Serialize)]
struct RecordsJson<'a> {
    schema_version: &'static str,
    records: &'a [EvalRecord],
}

#[derive(Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: String,
    pub success_threshold: f64,
    pub networks: usize,
    pub records: usize,
    pub baseline_unavailable: usize,
    pub failed_networks: Vec<String>,
}

enum Source {
    File(PathBuf),
    Spec(BenchmarkSpec),
}

struct Job {
    name: String,
    source: Source,
}

fn jobs(cfg: &RunConfig, base_dir: &Path) -> Result<Vec<Job>> {
    let mut out = Vec::new();
    for p in &cfg.networks {
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .ok_or_else(|| CliError::Config(format!("network path without a file name: {}", p.display())))?;
        out.push(Job {
            name,
            source: Source::File(base_dir.join(p)),
        });
    }
    for (i, spec) in cfg.generate.iter().enumerate() {
        out.push(Job {
            name: instance_name(i),
            source: Source::Spec(spec.clone()),
        });
    }
    let mut seen = BTreeSet::new();
    for j in &out {
        if !seen.insert(j.name.as_str()) {
            return Err(CliError::Config(format!("duplicate network name `{}`", j.name)));
        }
    }
    Ok(out)
}

/// Runs the evaluation of `cfg` in memory. `base_dir` resolves network
/// paths.
pub fn evaluate(cfg: &RunConfig, base_dir: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    let params = ModularityParams::parse(&cfg.gamma)?;
    let algorithms: Vec<AlgorithmId> = cfg.algorithms.iter().map(|a| a.parse()).collect::<Result<_>>()?;
    let jobs = jobs(cfg, base_dir)?;
    let work = |job: &Job| evaluate_network(job, cfg, &params, &algorithms);
    let results: Vec<(NetworkRow, Vec<EvalRecord>)> = if cfg.parallel {
        jobs.par_iter().map(work).collect()
    } else {
        jobs.iter().map(work).collect()
    };
    let mut networks = Vec::with_capacity(results.len());
    let mut records = Vec::new();
    for (row, recs) in results {
        networks.push(row);
        records.extend(recs);
    }
    networks.sort_by(|a, b| a.network.cmp(&b.network));
    records.sort_by(|a, b| (&a.network, &a.algorithm, a.seed).cmp(&(&b.network, &b.algorithm, b.seed)));
    Ok(RunOutput { records, networks })
}

fn load(job: &Job, giant: bool) -> std::result::Result<Graph, String> {
    let g = match &job.source {
        Source::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Graph::parse_edge_list(&text).map_err(|e| e.to_string())?
        }
        Source::Spec(spec) => generate(spec).map_err(|e| e.to_string())?.graph().clone(),
    };
    Ok(if giant { giant_component(&g).0 } else { g })
}

fn evaluate_network(
    job: &Job,
    cfg: &RunConfig,
    params: &ModularityParams,
    algorithms: &[AlgorithmId],
) -> (NetworkRow, Vec<EvalRecord>) {
    let mut row = NetworkRow {
        network: job.name.clone(),
        n: None,
        m: None,
        q_star: None,
        q_star_exact: None,
        optima_count: None,
        proven: false,
        exact_seconds: None,
        nodes_explored: None,
        error: None,
    };
    let g = match load(job, cfg.giant_component) {
        Ok(g) => g,
        Err(e) => {
            row.error = Some(e);
            return (row, Vec::new());
        }
    };
    row.n = Some(g.n());
    row.m = Some(g.m());
    let seconds = |d: Duration| if cfg.record_timing { d.as_secs_f64() } else { 0.0 };
    let baseline = match enumerate_optima(&g, params, &cfg.solve_config()) {
        Ok(r) => {
            row.exact_seconds = Some(seconds(r.elapsed));
            row.nodes_explored = Some(r.nodes_explored);
            if r.proven_optimal && r.enumeration_complete {
                row.proven = true;
                row.q_star = Some(to_f64(r.q_lb));
                row.q_star_exact = Some(r.q_lb.to_string());
                row.optima_count = Some(r.optima.len());
                Some(Baseline {
                    q_star: r.q_lb,
                    optima: r.optima,
                })
            } else {
                row.error = Some(format!("exact stage stopped: {:?}", r.termination));
                None
            }
        }
        Err(e) => {
            row.error = Some(format!("exact stage failed: {e}"));
            None
        }
    };
    let mut records = Vec::new();
    for &id in algorithms {
        let mut best: Option<EvalRecord> = None;
        for &seed in &cfg.seeds {
            let rec = match run_algorithm(&g, params, id, seed, &SolveConfig::default())
                .and_then(|out| record(&job.name, id, seed, &out, baseline.as_ref(), seconds(out.elapsed)))
            {
                Ok(rec) => rec,
                Err(e) => {
                    let note = format!("{id} seed {seed}: {e}");
                    row.error = Some(match row.error.take() {
                        Some(prev) => format!("{prev}; {note}"),
                        None => note,
                    });
                    continue;
                }
            };
            if !cfg.best_of_seeds {
                records.push(rec);
            } else if best.as_ref().map_or(true, |b| rec.q_alg > b.q_alg) {
                best = Some(rec);
            }
        }
        records.extend(best);
    }
    (row, records)
}

fn record(
    network: &str,
    id: AlgorithmId,
    seed: u64,
    out: &Outcome,
    baseline: Option<&Baseline>,
    solve_seconds: f64,
) -> Result<EvalRecord> {
    let mut rec = EvalRecord {
        network: network.to_string(),
        algorithm: id.to_string(),
        seed,
        q_alg: to_f64(out.q),
        q_star: None,
        gop: None,
        ami: None,
        rmi: None,
        ecs: None,
        k_alg: out.partition.k(),
        k_star: None,
        optima_count: None,
        solve_seconds,
        gap: out.solve.as_ref().map(|r| r.gap),
        rmi_approximate: false,
        baseline_unavailable: baseline.is_none(),
    };
    if let Some(base) = baseline {
        let s = score(&out.partition, out.q, base)?;
        rec.q_star = Some(to_f64(base.q_star));
        rec.gop = s.gop;
        rec.ami = Some(s.ami);
        rec.rmi = s.rmi;
        rec.ecs = Some(s.ecs);
        rec.k_star = Some(s.k_star);
        rec.optima_count = Some(base.optima.len());
        rec.rmi_approximate = s.rmi_approximate;
    }
    Ok(rec)
}

/// Reads `config_path`, evaluates it and writes `records.csv`,
/// `records.json`, `networks.csv` and `run.json` into `out_dir`.
pub fn cmd_run(config_path: &Path, out_dir: &Path) -> Result<RunOutput> {
    let text = std::fs::read_to_string(config_path).map_err(io_err(config_path))?;
    let cfg = RunConfig::from_json(&text).map_err(json_err(config_path))?;
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let output = evaluate(&cfg, base_dir)?;
    write_outputs(&cfg, &output, out_dir)?;
    Ok(output)
}

pub fn write_outputs(cfg: &RunConfig, output: &RunOutput, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    write_csv(&out_dir.join("records.csv"), &RECORD_HEADER, &output.records)?;
    write_csv(&out_dir.join("networks.csv"), &NETWORK_HEADER, &output.networks)?;
    let json = serde_json::to_string_pretty(&RecordsJson {
        schema_version: "1",
        records: &output.records,
    })
    .expect("records serialize");
    write(&out_dir.join("records.json"), json + "\n")?;
    let summary = RunSummary {
        schema_version: "1".into(),
        success_threshold: cfg.success_threshold,
        networks: output.networks.len(),
        records: output.records.len(),
        baseline_unavailable: output.records.iter().filter(|r| r.baseline_unavailable).count(),
        failed_networks: output
            .networks
            .iter()
            .filter(|n| n.error.is_some())
            .map(|n| n.network.clone())
            .collect(),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
    write(&out_dir.join("run.json"), json + "\n")
}

/// Writes `header` and then one row per item, so an empty table still
/// carries its header. `header` must list the fields in declaration order.
pub(crate) fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

use std::path::Path;
use std::time::Duration;

use modmax::exact::SolveConfig;
use modmax::graph::{Graph, ModularityParams};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algorithm::{run_algorithm, AlgorithmId};
use crate::error::{io_err, Result};

/// Exit status when a time or node limit stopped the solver.
pub const EXIT_LIMIT: i32 = 3;

/// Options of the `solve` command.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub gamma: Option<String>,
    pub seed: u64,
    /// Overrides the tolerance of `exact`; `bnb:<e>` carries its own.
    pub tolerance: Option<f64>,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

/// Output of `solve`: the JSON document and the process exit status.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub json: Value,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct HeuristicReport<'a> {
    schema_version: &'static str,
    algorithm: String,
    q: f64,
    q_exact: String,
    k: usize,
    elapsed_seconds: f64,
    assignment: &'a [usize],
    nodes: &'a [String],
}

/// Loads `path`, runs `algorithm` and renders the result.
pub fn cmd_solve(path: &Path, algorithm: &str, opts: &SolveOptions) -> Result<SolveOutput> {
    let mut id: AlgorithmId = algorithm.parse()?;
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let g = Graph::parse_edge_list(&text)?;
    let params = match &opts.gamma {
        Some(text) => ModularityParams::parse(text)?,
        None => ModularityParams::default(),
    };
    if let (AlgorithmId::Exact, Some(eps)) = (id, opts.tolerance) {
        if eps > 0.0 {
            id = AlgorithmId::Bnb(eps);
        }
    }
    let solver = SolveConfig {
        time_limit: opts.time_limit,
        node_limit: opts.node_limit,
        seed: opts.seed,
        ..SolveConfig::default()
    };
    let out = run_algorithm(&g, &params, id, opts.seed, &solver)?;
    match &out.solve {
        Some(r) => {
            let mut doc = serde_json::to_value(r.to_report()).expect("solver reports serialize");
            doc["algorithm"] = json!(id.to_string());
            doc["nodes"] = json!(g.labels());
            Ok(SolveOutput {
                json: doc,
                exit_code: if r.termination.hit_limit() { EXIT_LIMIT } else { 0 },
            })
        }
        None => {
            let report = HeuristicReport {
                schema_version: "1",
                algorithm: id.to_string(),
                q: out.q.to_f64().unwrap_or(f64::NAN),
                q_exact: out.q.to_string(),
                k: out.partition.k(),
                elapsed_seconds: out.elapsed.as_secs_f64(),
                assignment: out.partition.labels(),
                nodes: g.labels(),
            };
            Ok(SolveOutput {
                json: serde_json::to_value(report).expect("heuristic reports serialize"),
                exit_code: 0,
            })
        }
    }
}

use std::path::{Path, PathBuf};

use modmax::benchgen::{generate, BenchmarkSpec, GENERATOR_NAME};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, json_err, CliError, Result};

/// Default `mu` above which a spec is flagged as weakly modular.
pub const DEFAULT_WARN_MU: f64 = 0.5;

/// A specs file: a bare array of specs or `{"specs": [...]}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpecsFile {
    List(Vec<BenchmarkSpec>),
    Wrapped { specs: Vec<BenchmarkSpec> },
}

/// One generated instance as listed in the manifest.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestEntry {
    pub name: String,
    pub edge_list: String,
    pub sidecar: String,
    pub n: usize,
    pub m: usize,
    pub mu: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub schema_version: String,
    pub generator: String,
    pub instances: Vec<ManifestEntry>,
}

/// What `gen` wrote, plus warnings for the user.
#[derive(Debug, Clone)]
pub struct GenSummary {
    pub manifest: PathBuf,
    pub instances: usize,
    pub warnings: Vec<String>,
}

pub fn read_specs(path: &Path) -> Result<Vec<BenchmarkSpec>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let file: SpecsFile = serde_json::from_str(&text).map_err(json_err(path))?;
    Ok(match file {
        SpecsFile::List(specs) | SpecsFile::Wrapped { specs } => specs,
    })
}

/// Name of the `index`-th instance of a specs file.
pub fn instance_name(index: usize) -> String {
    format!("{GENERATOR_NAME}_{index:03}")
}

/// Flags specs whose `mu` exceeds `warn_mu`; `mu >= 1` is rejected later by
/// validation.
pub fn mixing_warnings(specs: &[BenchmarkSpec], warn_mu: f64) -> Vec<String> {
    specs
        .iter()
        .enumerate()
        .filter(|(_, s)| s.mu > warn_mu && s.mu < 1.0)
        .map(|(i, s)| {
            format!(
                "instance {i}: mu = {} exceeds {warn_mu}; planted communities are structurally weak",
                s.mu
            )
        })
        .collect()
}

/// Generates every spec of `specs_path` into `out_dir`: `<name>.txt` edge
/// lists, `<name>.json` sidecars and `manifest.json`.
pub fn cmd_gen(specs_path: &Path, out_dir: &Path, warn_mu: f64) -> Result<GenSummary> {
    let specs = read_specs(specs_path)?;
    if specs.is_empty() {
        return Err(CliError::Config(format!("{}: no specs", specs_path.display())));
    }
    let warnings = mixing_warnings(&specs, warn_mu);
    for (index, spec) in specs.iter().enumerate() {
        spec.validate().map_err(|source| CliError::Instance { index, source })?;
    }
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut instances = Vec::with_capacity(specs.len());
    for (index, spec) in specs.iter().enumerate() {
        let pg = generate(spec).map_err(|source| CliError::Instance { index, source })?;
        let name = instance_name(index);
        let edge_list = format!("{name}.txt");
        let sidecar = format!("{name}.json");
        write(&out_dir.join(&edge_list), pg.graph().to_edge_list())?;
        let json = serde_json::to_string_pretty(&pg.sidecar(spec)).expect("sidecars serialize");
        write(&out_dir.join(&sidecar), json + "\n")?;
        instances.push(ManifestEntry {
            name,
            edge_list,
            sidecar,
            n: pg.graph().n(),
            m: pg.graph().m(),
            mu: spec.mu,
            seed: spec.seed,
        });
    }
    let manifest = Manifest {
        schema_version: "1".into(),
        generator: GENERATOR_NAME.into(),
        instances,
    };
    let path = out_dir.join("manifest.json");
    write(&path, serde_json::to_string_pretty(&manifest).expect("manifests serialize") + "\n")?;
    Ok(GenSummary {
        manifest: path,
        instances: specs.len(),
        warnings,
    })
}

pub(crate) fn write(path: &Path, contents: String) -> Result<()> {
    std::fs::write(path, contents).map_err(io_err(path))
}

//! Report documents and their JSON / CSV encodings.
//!
//! Predictor labels in reports are 1-based. Run-dependent facts that must not
//! break byte-identical reports (wall time, thread count) go to a separate
//! timing file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use condscreen_core::EvaluationMetrics;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: Manifest,
    pub methods: IndexMap<String, MethodReport>,
    /// Per-predictor table, screen mode only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predictors: Option<Vec<PredictorRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioManifest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputManifest>,
    pub n: usize,
    pub p: usize,
    pub replications: usize,
    pub methods: Vec<String>,
    pub cutoffs: Vec<usize>,
    pub cutoff_rule: CutoffManifest,
    pub kernel: String,
    pub bandwidth: BandwidthManifest,
    pub eps: f64,
    pub quantile_levels: Vec<f64>,
    #[serde(default)]
    pub overflow_guard_hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioManifest {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    pub seed: u64,
    /// 1-based.
    pub active: Vec<usize>,
    pub exposure_position: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputManifest {
    pub data: String,
    pub response: String,
    pub exposure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffManifest {
    pub kind: String,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthManifest {
    /// `fixed` or `default` (1.06 sd(u) n^(-1/5), resolved per dataset).
    pub rule: String,
    /// The bandwidth used when a single dataset is screened or fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Resolved bandwidth of every simulated replication, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_replication: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MethodReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<usize>>,
    /// Cutoff -> selected predictor names in rank order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected: Option<IndexMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(rename = "R")]
    pub r: IndexMap<String, f64>,
    #[serde(rename = "S_quantiles")]
    pub s_quantiles: IndexMap<String, f64>,
    #[serde(rename = "P_a")]
    pub p_a: IndexMap<String, f64>,
    #[serde(rename = "P_k")]
    pub p_k: IndexMap<String, IndexMap<String, f64>>,
}

impl From<&EvaluationMetrics> for MetricsReport {
    fn from(m: &EvaluationMetrics) -> Self {
        let r = m
            .rank_by_active
            .iter()
            .map(|(&k, &v)| ((k + 1).to_string(), v))
            .collect();
        let s_quantiles = m
            .min_model_size_quantiles
            .iter()
            .map(|&(level, v)| (level_key(level), v))
            .collect();
        let p_a = m.p_all.iter().map(|(&d, &v)| (d.to_string(), v)).collect();
        let mut p_k: IndexMap<String, IndexMap<String, f64>> = IndexMap::new();
        for (&(d, k), &v) in &m.p_each {
            p_k.entry(d.to_string())
                .or_default()
                .insert((k + 1).to_string(), v);
        }
        Self {
            r,
            s_quantiles,
            p_a,
            p_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorRow {
    pub name: String,
    pub utilities: IndexMap<String, f64>,
    pub ranks: IndexMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub threads: usize,
}

pub fn level_key(level: f64) -> String {
    format!("{level}")
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Long-format metrics table for one method.
    pub fn metrics_csv(metrics: &MetricsReport) -> String {
        let mut out = String::from("metric,d,predictor,level,value\n");
        for (k, v) in &metrics.r {
            let _ = writeln!(out, "R,,{k},,{v}");
        }
        for (level, v) in &metrics.s_quantiles {
            let _ = writeln!(out, "S_quantile,,,{level},{v}");
        }
        for (d, v) in &metrics.p_a {
            let _ = writeln!(out, "P_a,{d},,,{v}");
        }
        for (d, row) in &metrics.p_k {
            for (k, v) in row {
                let _ = writeln!(out, "P_k,{d},{k},,{v}");
            }
        }
        out
    }

    /// Per-predictor table: name, then utility and rank for each method.
    pub fn predictors_csv(&self) -> String {
        let methods: Vec<&String> = self.methods.keys().collect();
        let mut out = String::from("name");
        for m in &methods {
            let _ = write!(out, ",{m}_utility,{m}_rank");
        }
        out.push('\n');
        for row in self.predictors.iter().flatten() {
            out.push_str(&row.name);
            for m in &methods {
                let _ = write!(
                    out,
                    ",{},{}",
                    row.utilities[m.as_str()],
                    row.ranks[m.as_str()]
                );
            }
            out.push('\n');
        }
        out
    }

    /// Files that make up this report in the requested format, as
    /// `(path, contents)` pairs.
    pub fn render(
        &self,
        out: &Path,
        format: crate::config::OutputFormat,
    ) -> Result<Vec<(PathBuf, String)>> {
        use crate::config::OutputFormat;
        match format {
            OutputFormat::Json => Ok(vec![(out.to_path_buf(), self.to_json()?)]),
            OutputFormat::Csv => {
                let manifest = serde_json::to_string_pretty(&self.manifest)? + "\n";
                let mut files = vec![(sibling(out, "manifest.json"), manifest)];
                if self.predictors.is_some() {
                    files.push((out.to_path_buf(), self.predictors_csv()));
                } else {
                    for (name, method) in &self.methods {
                        if let Some(metrics) = &method.metrics {
                            files.push((
                                sibling(out, &format!("{name}.csv")),
                                Self::metrics_csv(metrics),
                            ));
                        }
                    }
                }
                Ok(files)
            }
        }
    }
}

/// `dir/report.json` + `timing.json` -> `dir/report.timing.json`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.{suffix}"))
}

/// Writes every file through a temporary sibling and renames once all are
/// written, so a failure leaves no partial report behind.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let tmp = path.with_extension("partial");
        if let Err(e) = std::fs::write(&tmp, contents) {
            for t in &staged {
                let _ = std::fs::remove_file(t);
            }
            return Err(CliError::io(&tmp, e));
        }
        staged.push(tmp);
    }
    for (tmp, (path, _)) in staged.iter().zip(files) {
        std::fs::rename(tmp, path).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths() {
        assert_eq!(
            sibling(Path::new("out/run.json"), "timing.json"),
            PathBuf::from("out/run.timing.json")
        );
        assert_eq!(
            sibling(Path::new("run"), "csirs.csv"),
            PathBuf::from("run.csirs.csv")
        );
    }

    #[test]
    fn level_keys() {
        assert_eq!(level_key(0.05), "0.05");
        assert_eq!(level_key(0.5), "0.5");
    }
}

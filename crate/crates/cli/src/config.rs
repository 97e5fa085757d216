//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file, with `CONDSCREEN_THREADS` as the last fallback for the
//! thread count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use condscreen_core::simgen::{ExposurePosition, Scenario, ScenarioSpec};
use condscreen_core::{submodel_size, Method};
use serde::Serialize;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "CONDSCREEN_THREADS";

/// Conditional feature screening studies.
#[derive(Debug, Default, Parser)]
#[command(name = "condscreen", version, about)]
pub struct Cli {
    /// Flat key = value file with defaults for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// simulate | screen
    #[arg(long)]
    pub mode: Option<String>,
    /// ex1case1, ex1case2, ex2case1 .. ex2case4
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    /// Number of replications.
    #[arg(long)]
    pub reps: Option<String>,
    /// Comma-separated subset of csirs,sirs,dcsis,ccsis.
    #[arg(long)]
    pub methods: Option<String>,
    /// Explicit cutoffs, e.g. 16,32,48.
    #[arg(long, conflicts_with = "nu")]
    pub d: Option<String>,
    /// Cutoff multipliers resolved as nu * floor(n^0.8 / ln n^0.8).
    #[arg(long)]
    pub nu: Option<String>,
    /// Fixed bandwidth; defaults to 1.06 sd(u) n^(-1/5).
    #[arg(long)]
    pub bandwidth: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Worker threads, or auto.
    #[arg(long)]
    pub threads: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Input CSV for screen mode.
    #[arg(long)]
    pub data: Option<String>,
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub exposure: Option<String>,
    /// last | first: where the latent exposure sits in the AR block.
    #[arg(long = "exposure-position")]
    pub exposure_position: Option<String>,
    /// Suppress progress output.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Screen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl Threads {
    /// Thread count handed to the pool builder; 0 lets rayon decide.
    pub fn pool_size(self) -> usize {
        match self {
            Threads::Auto => 0,
            Threads::Fixed(t) => t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffRule {
    D(Vec<usize>),
    Nu(Vec<usize>),
}

impl CutoffRule {
    /// Concrete cutoffs for a sample of size `n`, deduplicated and ascending.
    pub fn resolve(&self, n: usize) -> Vec<usize> {
        let mut out: Vec<usize> = match self {
            CutoffRule::D(d) => d.clone(),
            CutoffRule::Nu(nu) => nu.iter().map(|&v| submodel_size(n, v)).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks every resolved cutoff against `[1, p]`.
    pub fn validate(&self, n: usize, p: usize) -> std::result::Result<Vec<usize>, String> {
        let resolved = self.resolve(n);
        if let Some(&bad) = resolved.iter().find(|&&d| d == 0 || d > p) {
            let source = match self {
                CutoffRule::D(_) => "d",
                CutoffRule::Nu(_) => "nu",
            };
            return Err(format!("{source}: cutoff {bad} outside [1, {p}] (n = {n})"));
        }
        Ok(resolved)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenFileInput {
    pub path: PathBuf,
    pub response_column: String,
    pub exposure_column: String,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub scenario: ScenarioSpec,
    pub replications: usize,
    pub methods: Vec<Method>,
    pub cutoffs: CutoffRule,
    pub bandwidth: Option<f64>,
    pub seed: u64,
    pub threads: Threads,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
    pub quiet: bool,
    pub input: Option<ScreenFileInput>,
}

const KEYS: [&str; 19] = [
    "mode",
    "scenario",
    "n",
    "p",
    "rho",
    "reps",
    "methods",
    "d",
    "nu",
    "bandwidth",
    "seed",
    "threads",
    "out",
    "format",
    "data",
    "response",
    "exposure",
    "exposure-position",
    "quiet",
];

/// Parses the flat config format: one `key = value` per line, `#` comments,
/// keys spelled like the long flags (`_` and `-` interchangeable).
pub fn parse_config_file(text: &str) -> std::result::Result<BTreeMap<String, String>, Vec<String>> {
    let mut map = BTreeMap::new();
    let mut errors = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=').or_else(|| line.split_once(':')) else {
            errors.push(format!(
                "config line {}: expected 'key = value'",
                lineno + 1
            ));
            continue;
        };
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        let key = key.trim_start_matches("--").to_string();
        if !KEYS.contains(&key.as_str()) {
            errors.push(format!("config line {}: unknown key '{key}'", lineno + 1));
            continue;
        }
        map.insert(key, value.trim().to_string());
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(errors)
    }
}

impl RunConfig {
    /// Resolves flags, the optional config file, and the environment.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let mut values = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_config_file(&text).map_err(CliError::Config)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("mode", &cli.mode),
            ("scenario", &cli.scenario),
            ("n", &cli.n),
            ("p", &cli.p),
            ("rho", &cli.rho),
            ("reps", &cli.reps),
            ("methods", &cli.methods),
            ("d", &cli.d),
            ("nu", &cli.nu),
            ("bandwidth", &cli.bandwidth),
            ("seed", &cli.seed),
            ("threads", &cli.threads),
            ("out", &cli.out),
            ("format", &cli.format),
            ("data", &cli.data),
            ("response", &cli.response),
            ("exposure", &cli.exposure),
            ("exposure-position", &cli.exposure_position),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                values.insert(key.to_string(), v.clone());
            }
        }
        // An explicit flag for one cutoff form replaces the other from the file.
        if cli.d.is_some() {
            values.remove("nu");
        }
        if cli.nu.is_some() {
            values.remove("d");
        }
        if cli.quiet {
            values.insert("quiet".into(), "true".into());
        }
        if !values.contains_key("threads") {
            if let Ok(v) = std::env::var(THREADS_ENV) {
                values.insert("threads".into(), v);
            }
        }
        Self::from_values(&values)
    }

    /// Validates a merged key/value map, reporting every bad field.
    pub fn from_values(values: &BTreeMap<String, String>) -> Result<Self> {
        let mut errors = Vec::new();
        let get = |k: &str| values.get(k).map(String::as_str);

        let mode = match get("mode").unwrap_or("simulate") {
            "simulate" | "sim" => Mode::Simulate,
            "screen" | "screen-file" => Mode::Screen,
            other => {
                errors.push(format!("mode: expected simulate or screen, got '{other}'"));
                Mode::Simulate
            }
        };

        let scenario_name = get("scenario").unwrap_or("ex1case1");
        let scenario = Scenario::from_str(scenario_name).unwrap_or_else(|_| {
            errors.push(format!("scenario: unknown scenario '{scenario_name}'"));
            Scenario::Ex1Case1
        });
        let n = number::<usize>(get("n"), "n", 200, &mut errors);
        let p = number::<usize>(get("p"), "p", 1000, &mut errors);
        let rho = number::<f64>(get("rho"), "rho", 0.5, &mut errors);
        let replications = number::<usize>(get("reps"), "reps", 100, &mut errors);
        if replications == 0 {
            errors.push("reps: must be at least 1".into());
        }
        let seed = number::<u64>(get("seed"), "seed", 1, &mut errors);

        let methods = match get("methods") {
            None => Method::ALL.to_vec(),
            Some(text) => {
                let mut out = Vec::new();
                for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    match part.parse::<Method>() {
                        Ok(m) => out.push(m),
                        Err(e) => errors.push(format!("methods: {e}")),
                    }
                }
                out.sort_unstable();
                out.dedup();
                if out.is_empty() && !errors.iter().any(|e| e.starts_with("methods:")) {
                    errors.push("methods: at least one method is required".into());
                }
                out
            }
        };

        let cutoffs = match (get("d"), get("nu")) {
            (Some(_), Some(_)) => {
                errors.push("d: give either d or nu, not both".into());
                CutoffRule::Nu(vec![1, 2, 3])
            }
            (Some(d), None) => CutoffRule::D(list(d, "d", &mut errors)),
            (None, Some(nu)) => CutoffRule::Nu(list(nu, "nu", &mut errors)),
            (None, None) => CutoffRule::Nu(vec![1, 2, 3]),
        };

        let bandwidth = get("bandwidth").and_then(|v| match v.parse::<f64>() {
            Ok(h) if h.is_finite() && h > 0.0 => Some(h),
            _ => {
                errors.push(format!("bandwidth: expected a positive number, got '{v}'"));
                None
            }
        });

        let threads = match get("threads").unwrap_or("auto") {
            "auto" | "" => Threads::Auto,
            v => match v.parse::<usize>() {
                Ok(t) if t >= 1 => Threads::Fixed(t),
                _ => {
                    errors.push(format!(
                        "threads: expected a positive integer or 'auto', got '{v}'"
                    ));
                    Threads::Auto
                }
            },
        };

        let output_format = match get("format").unwrap_or("json") {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            other => {
                errors.push(format!("format: expected csv or json, got '{other}'"));
                OutputFormat::Json
            }
        };
        let output_path = PathBuf::from(get("out").unwrap_or(match output_format {
            OutputFormat::Json => "report.json",
            OutputFormat::Csv => "report.csv",
        }));

        let quiet = match get("quiet").unwrap_or("false") {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => {
                errors.push(format!("quiet: expected true or false, got '{other}'"));
                false
            }
        };

        let exposure_position = match get("exposure-position").unwrap_or("last") {
            "last" => ExposurePosition::Last,
            "first" => ExposurePosition::First,
            other => {
                errors.push(format!(
                    "exposure-position: expected last or first, got '{other}'"
                ));
                ExposurePosition::Last
            }
        };

        let scenario = match ScenarioSpec::new(scenario, n, p, rho, seed) {
            Ok(mut spec) => {
                spec.exposure_position = exposure_position;
                spec
            }
            Err(e) => {
                if mode == Mode::Simulate {
                    errors.push(format!("scenario: {e}"));
                }
                ScenarioSpec::reference(scenario, seed)
            }
        };

        let input = match mode {
            Mode::Screen => {
                let mut field = |k: &str| match get(k) {
                    Some(v) if !v.is_empty() => Some(v.to_string()),
                    _ => {
                        errors.push(format!("{k}: required in screen mode"));
                        None
                    }
                };
                let data = field("data");
                let response = field("response");
                let exposure = field("exposure");
                match (data, response, exposure) {
                    (Some(path), Some(r), Some(e)) => {
                        if r == e {
                            errors.push("exposure: must differ from the response column".into());
                        }
                        Some(ScreenFileInput {
                            path: PathBuf::from(path),
                            response_column: r,
                            exposure_column: e,
                        })
                    }
                    _ => None,
                }
            }
            Mode::Simulate => {
                if errors.is_empty() {
                    if let Err(e) = cutoffs.validate(scenario.n, scenario.p) {
                        errors.push(e);
                    }
                }
                None
            }
        };

        if !errors.is_empty() {
            return Err(CliError::Config(errors));
        }
        Ok(Self {
            mode,
            scenario,
            replications,
            methods,
            cutoffs,
            bandwidth,
            seed,
            threads,
            output_path,
            output_format,
            quiet,
            input,
        })
    }

    /// Simulation config with library defaults for everything not given.
    pub fn simulate(scenario: ScenarioSpec, replications: usize, out: impl AsRef<Path>) -> Self {
        Self {
            mode: Mode::Simulate,
            seed: scenario.seed,
            scenario,
            replications,
            methods: Method::ALL.to_vec(),
            cutoffs: CutoffRule::Nu(vec![1, 2, 3]),
            bandwidth: None,
            threads: Threads::Auto,
            output_path: out.as_ref().to_path_buf(),
            output_format: OutputFormat::Json,
            quiet: true,
            input: None,
        }
    }
}

fn number<T: FromStr>(value: Option<&str>, key: &str, default: T, errors: &mut Vec<String>) -> T {
    match value {
        None => default,
        Some(v) => v.trim().parse().unwrap_or_else(|_| {
            errors.push(format!("{key}: cannot parse '{v}'"));
            default
        }),
    }
}

fn list(text: &str, key: &str, errors: &mut Vec<String>) -> Vec<usize> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.parse::<usize>() {
            Ok(v) if v >= 1 => out.push(v),
            _ => errors.push(format!("{key}: '{part}' is not a positive integer")),
        }
    }
    if out.is_empty() {
        errors.push(format!(
            "{key}: expected a comma-separated list of positive integers"
        ));
    }
    out
}

//! Seeded replication studies over one scenario and several methods.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use condscreen_core::metrics::{aggregate, DEFAULT_QUANTILE_LEVELS};
use condscreen_core::simgen::generate;
use condscreen_core::{
    rank_and_select, EvaluationMetrics, KernelSpec, Method, Screener, ScreeningResult, DEFAULT_EPS,
};
use indexmap::IndexMap;
use rayon::prelude::*;

use crate::config::{CutoffRule, RunConfig};
use crate::error::{CliError, Result};
use crate::report::{
    sibling, write_all, BandwidthManifest, CutoffManifest, Manifest, MethodReport, MetricsReport,
    Report, ScenarioManifest, Timing,
};

/// Everything one replication contributes to the study.
#[derive(Debug, Clone)]
pub struct ReplicationOutcome {
    pub bandwidth: Option<f64>,
    pub clamped: usize,
    pub results: Vec<ScreeningResult>,
}

/// Aggregated study, ready to be reported.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub cutoffs: Vec<usize>,
    pub bandwidths: Vec<Option<f64>>,
    pub clamped: usize,
    pub metrics: IndexMap<Method, EvaluationMetrics>,
    pub wall_seconds: f64,
    pub threads: usize,
}

/// Kernel spec for a run: the override if given, else the default rule.
pub fn kernel_spec(bandwidth: Option<f64>) -> Result<KernelSpec> {
    Ok(match bandwidth {
        Some(h) => KernelSpec::fixed(h)?,
        None => KernelSpec::default(),
    })
}

/// Runs one replication: generate, screen with every method, rank.
pub fn run_replication(
    config: &RunConfig,
    index: u64,
    cutoffs: &[usize],
) -> Result<ReplicationOutcome> {
    let spec = config.scenario.for_replication(index);
    let rep = generate(&spec)?;
    let needs_table = config
        .methods
        .iter()
        .any(|m| matches!(m, Method::Csirs | Method::Ccsis));
    let screener = if needs_table {
        Screener::new(&rep.data, &kernel_spec(config.bandwidth)?, DEFAULT_EPS)?
    } else {
        Screener::unconditional(&rep.data)
    };
    let results = config
        .methods
        .iter()
        .map(|&m| rank_and_select(screener.utilities(m)?, cutoffs).map_err(CliError::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationOutcome {
        bandwidth: screener.bandwidth(),
        clamped: rep.clamped,
        results,
    })
}

/// Runs the whole study without touching the filesystem.
pub fn simulate(config: &RunConfig) -> Result<SimulationOutcome> {
    let start = Instant::now();
    let cutoffs = config
        .cutoffs
        .validate(config.scenario.n, config.scenario.p)
        .map_err(|e| CliError::Config(vec![e]))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.pool_size())
        .build()
        .expect("thread pool");
    let threads = pool.current_num_threads();

    let reps = config.replications;
    let step = reps.div_ceil(10).max(1);
    let done = AtomicUsize::new(0);
    let outcomes: Vec<ReplicationOutcome> = pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(|r| {
                let out = run_replication(config, r as u64, &cutoffs);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if !config.quiet && (finished % step == 0 || finished == reps) {
                    eprintln!("progress: {finished}/{reps} replications");
                }
                out
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let active = config.scenario.active_set.clone();
    let mut metrics = IndexMap::new();
    for (slot, &method) in config.methods.iter().enumerate() {
        let per_rep: Vec<(ScreeningResult, Vec<usize>)> = outcomes
            .iter()
            .map(|o| (o.results[slot].clone(), active.clone()))
            .collect();
        metrics.insert(
            method,
            aggregate(&per_rep, &cutoffs, &DEFAULT_QUANTILE_LEVELS)?,
        );
    }

    Ok(SimulationOutcome {
        cutoffs,
        bandwidths: outcomes.iter().map(|o| o.bandwidth).collect(),
        clamped: outcomes.iter().map(|o| o.clamped).sum(),
        metrics,
        wall_seconds: start.elapsed().as_secs_f64(),
        threads,
    })
}

pub fn build_report(config: &RunConfig, outcome: &SimulationOutcome) -> Report {
    let sc = &config.scenario;
    let per_replication: Vec<f64> = outcome.bandwidths.iter().flatten().copied().collect();
    let bandwidth = BandwidthManifest {
        rule: if config.bandwidth.is_some() {
            "fixed"
        } else {
            "default"
        }
        .into(),
        value: config.bandwidth,
        per_replication: (!per_replication.is_empty()).then_some(per_replication),
    };
    let (kind, values) = match &config.cutoffs {
        CutoffRule::D(v) => ("d", v.clone()),
        CutoffRule::Nu(v) => ("nu", v.clone()),
    };
    let manifest = Manifest {
        tool: "condscreen".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        mode: "simulate".into(),
        scenario: Some(ScenarioManifest {
            name: sc.scenario.to_string(),
            n: sc.n,
            p: sc.p,
            rho: sc.rho,
            seed: sc.seed,
            active: sc.active_set.iter().map(|k| k + 1).collect(),
            exposure_position: format!("{:?}", sc.exposure_position).to_lowercase(),
        }),
        input: None,
        n: sc.n,
        p: sc.p,
        replications: config.replications,
        methods: config.methods.iter().map(|m| m.to_string()).collect(),
        cutoffs: outcome.cutoffs.clone(),
        cutoff_rule: CutoffManifest {
            kind: kind.into(),
            values,
        },
        kernel: "epanechnikov".into(),
        bandwidth,
        eps: DEFAULT_EPS,
        quantile_levels: DEFAULT_QUANTILE_LEVELS.to_vec(),
        overflow_guard_hits: outcome.clamped,
    };
    let methods = outcome
        .metrics
        .iter()
        .map(|(m, metrics)| {
            (
                m.to_string(),
                MethodReport {
                    metrics: Some(MetricsReport::from(metrics)),
                    ..Default::default()
                },
            )
        })
        .collect();
    Report {
        manifest,
        methods,
        predictors: None,
    }
}

/// Runs the study and writes the report files plus the timing sidecar.
pub fn run_simulation(config: &RunConfig) -> Result<Report> {
    let outcome = simulate(config)?;
    let report = build_report(config, &outcome);
    let mut files = report.render(&config.output_path, config.output_format)?;
    let timing = Timing {
        wall_seconds: outcome.wall_seconds,
        threads: outcome.threads,
    };
    files.push((
        sibling(&config.output_path, "timing.json"),
        serde_json::to_string_pretty(&timing)? + "\n",
    ));
    write_all(&files)?;
    Ok(report)
}

//! Screening a user-supplied CSV dataset.

use std::path::Path;
use std::time::Instant;

use condscreen_core::{rank_and_select, DataSet, Method, Screener, ScreeningResult, DEFAULT_EPS};
use indexmap::IndexMap;
use ndarray::{Array1, Array2};

use crate::config::{CutoffRule, RunConfig, ScreenFileInput};
use crate::error::{CliError, Result};
use crate::report::{
    sibling, write_all, BandwidthManifest, CutoffManifest, InputManifest, Manifest, MethodReport,
    PredictorRow, Report, Timing,
};
use crate::simulate::kernel_spec;

/// A parsed input file.
#[derive(Debug, Clone)]
pub struct LoadedData {
    pub predictor_names: Vec<String>,
    pub data: DataSet,
}

/// Reads a headed, comma-separated numeric file. Rows are numbered from 1
/// for the first data row.
pub fn load_csv(path: &Path, input: &ScreenFileInput) -> Result<LoadedData> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_csv(file, input)
}

pub fn read_csv<R: std::io::Read>(reader: R, input: &ScreenFileInput) -> Result<LoadedData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::MissingColumn(name.to_string()))
    };
    let response = find(&input.response_column)?;
    let exposure = find(&input.exposure_column)?;
    let predictors: Vec<usize> = (0..headers.len())
        .filter(|&c| c != response && c != exposure)
        .collect();
    if predictors.is_empty() {
        return Err(CliError::NoPredictors);
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = idx + 1;
        let mut values = Vec::with_capacity(headers.len());
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| CliError::Parse {
                row,
                column: headers[c].clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(CliError::NonFiniteValue {
                    row,
                    column: headers[c].clone(),
                });
            }
            values.push(v);
        }
        rows.push(values);
    }

    let n = rows.len();
    let x = Array2::from_shape_fn((n, predictors.len()), |(i, k)| rows[i][predictors[k]]);
    let y = Array1::from_iter(rows.iter().map(|r| r[response]));
    let u = Array1::from_iter(rows.iter().map(|r| r[exposure]));
    Ok(LoadedData {
        predictor_names: predictors.iter().map(|&c| headers[c].clone()).collect(),
        data: DataSet::new(x, y, u)?,
    })
}

/// Screens a loaded dataset with every configured method.
pub fn screen_dataset(config: &RunConfig, loaded: &LoadedData) -> Result<(Report, f64)> {
    let data = &loaded.data;
    let cutoffs = config
        .cutoffs
        .validate(data.n(), data.p())
        .map_err(|e| CliError::Config(vec![e]))?;
    let needs_table = config
        .methods
        .iter()
        .any(|m| matches!(m, Method::Csirs | Method::Ccsis));
    let screener = if needs_table {
        Screener::new(data, &kernel_spec(config.bandwidth)?, DEFAULT_EPS)?
    } else {
        Screener::unconditional(data)
    };

    let results: Vec<(Method, ScreeningResult)> = config
        .methods
        .iter()
        .map(|&m| Ok((m, rank_and_select(screener.utilities(m)?, &cutoffs)?)))
        .collect::<Result<_>>()?;

    let names = &loaded.predictor_names;
    let methods: IndexMap<String, MethodReport> = results
        .iter()
        .map(|(m, res)| {
            let ranks = (0..data.p())
                .map(|k| res.rank_of(k).expect("k < p"))
                .collect();
            let selected = res
                .selected
                .iter()
                .map(|(d, idx)| {
                    (
                        d.to_string(),
                        idx.iter().map(|&k| names[k].clone()).collect(),
                    )
                })
                .collect();
            let report = MethodReport {
                utilities: Some(res.utilities.omega.clone()),
                ranks: Some(ranks),
                selected: Some(selected),
                metrics: None,
            };
            (m.to_string(), report)
        })
        .collect();

    // Sort by the C-SIRS ranking when present, else by the first method's.
    let lead = results
        .iter()
        .find(|(m, _)| *m == Method::Csirs)
        .unwrap_or(&results[0]);
    let predictors = lead
        .1
        .ranking
        .iter()
        .map(|&k| PredictorRow {
            name: names[k].clone(),
            utilities: results
                .iter()
                .map(|(m, r)| (m.to_string(), r.utilities.omega[k]))
                .collect(),
            ranks: results
                .iter()
                .map(|(m, r)| (m.to_string(), r.rank_of(k).expect("k < p")))
                .collect(),
        })
        .collect();

    let input = config.input.as_ref().expect("screen mode carries an input");
    let (kind, values) = match &config.cutoffs {
        CutoffRule::D(v) => ("d", v.clone()),
        CutoffRule::Nu(v) => ("nu", v.clone()),
    };
    let h = screener.bandwidth();
    let manifest = Manifest {
        tool: "condscreen".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        mode: "screen".into(),
        scenario: None,
        input: Some(InputManifest {
            data: input.path.display().to_string(),
            response: input.response_column.clone(),
            exposure: input.exposure_column.clone(),
        }),
        n: data.n(),
        p: data.p(),
        replications: 1,
        methods: config.methods.iter().map(|m| m.to_string()).collect(),
        cutoffs,
        cutoff_rule: CutoffManifest {
            kind: kind.into(),
            values,
        },
        kernel: "epanechnikov".into(),
        bandwidth: BandwidthManifest {
            rule: if config.bandwidth.is_some() {
                "fixed"
            } else {
                "default"
            }
            .into(),
            value: h,
            per_replication: None,
        },
        eps: DEFAULT_EPS,
        quantile_levels: Vec::new(),
        overflow_guard_hits: 0,
    };
    Ok((
        Report {
            manifest,
            methods,
            predictors: Some(predictors),
        },
        h.unwrap_or(f64::NAN),
    ))
}

/// Loads, screens, and writes the per-predictor report.
pub fn run_screen_file(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::Config(vec!["data: required in screen mode".into()]))?;
    let loaded = load_csv(&input.path, input)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.pool_size())
        .build()
        .expect("thread pool");
    let threads = pool.current_num_threads();
    let (report, _) = pool.install(|| screen_dataset(config, &loaded))?;
    let mut files = report.render(&config.output_path, config.output_format)?;
    let timing = Timing {
        wall_seconds: start.elapsed().as_secs_f64(),
        threads,
    };
    files.push((
        sibling(&config.output_path, "timing.json"),
        serde_json::to_string_pretty(&timing)? + "\n",
    ));
    write_all(&files)?;
    Ok(report)
}

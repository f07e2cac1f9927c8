use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentResult, TurnoverRecord};
use crate::analysis::{friedman_test, nemenyi_posthoc, ResultMatrix};

use crate::{Error, Result};

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub network_type: String,
    pub strategy: String,
    pub phi: f64,
    pub seed_count: usize,
    pub runs: usize,
    pub total_influenced: f64,
    pub total_influenced_std: Option<f64>,
    pub total_influenced_excluding_seeds: f64,
    pub seed_digest: String,
    /// Mean cumulative influenced counts, `;`-separated, starting at the seeds.
    pub cumulative_counts: String,
}

/// One line of `friedman.csv`: a network type's mean rank within the test
/// for one (strategy, phi) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanRow {
    pub strategy: String,
    pub phi: f64,
    pub network_type: String,
    pub mean_rank: f64,
    pub friedman_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NemenyiRow {
    pub strategy: String,
    pub phi: f64,
    pub pair: String,
    pub adjusted_p: f64,
}

/// One line of `turnover.csv`; `window` is `1..=K` or `mean`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnoverRow {
    pub dataset: String,
    pub network_type: String,
    pub strategy: String,
    pub window: String,
    pub turnover_pct: Option<f64>,
    pub turnover_std_pct: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TraceWindow {
    window: usize,
    newly_influenced: Vec<String>,
    cumulative: usize,
}

#[derive(Debug, Serialize)]
struct TraceFile<'a> {
    dataset: &'a str,
    network_type: &'a str,
    strategy: String,
    phi: f64,
    runs: usize,
    /// Seeds and windows below are those of the first run.
    seeds: Vec<String>,
    windows: Vec<TraceWindow>,
    total_influenced: usize,
    total_influenced_excluding_seeds: usize,
    mean_total_influenced: f64,
    total_influenced_std: Option<f64>,
    mean_cumulative_counts: &'a [f64],
}

pub fn summary_rows(result: &ExperimentResult) -> Vec<SummaryRow> {
    result
        .records
        .iter()
        .map(|r| SummaryRow {
            dataset: r.dataset.clone(),
            network_type: r.network_type.clone(),
            strategy: r.strategy.label(),
            phi: r.phi,
            seed_count: r.seed_count,
            runs: r.runs,
            total_influenced: r.total_influenced,
            total_influenced_std: r.total_influenced_std,
            total_influenced_excluding_seeds: r.total_influenced_excluding_seeds,
            seed_digest: r.seed_digest.clone(),
            cumulative_counts: r
                .mean_cumulative_counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        })
        .collect()
}

pub fn turnover_rows(records: &[TurnoverRecord]) -> Vec<TurnoverRow> {
    let mut rows = Vec::new();
    for rec in records {
        let r = &rec.report;
        let row = |window: String, pct: Option<f64>, std: Option<f64>| TurnoverRow {
            dataset: rec.dataset.clone(),
            network_type: rec.network_type.clone(),
            strategy: rec.strategy.label(),
            window,
            turnover_pct: pct,
            turnover_std_pct: std,
        };
        for (l, pct) in r.per_window.iter().enumerate() {
            let std = r.per_window_std.get(l).copied().flatten();
            rows.push(row((l + 1).to_string(), *pct, std));
        }
        rows.push(row("mean".into(), r.mean, r.mean_std));
    }
    rows
}

/// Friedman and Nemenyi tables over summary rows from one or more datasets.
///
/// For every (strategy, phi) pair the datasets are the blocks and the network
/// types the treatments. Pairs with fewer than two of either are skipped with
/// a warning; a missing or duplicated cell is an error.
pub fn rank_tests(rows: &[SummaryRow], clamp: bool) -> Result<(Vec<FriedmanRow>, Vec<NemenyiRow>)> {
    let mut groups: Vec<((String, f64), Vec<&SummaryRow>)> = Vec::new();
    for row in rows {
        let key = (row.strategy.clone(), row.phi);
        match groups
            .iter_mut()
            .find(|(k, _)| k.0 == key.0 && k.1.to_bits() == key.1.to_bits())
        {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }

    let mut friedman = Vec::new();
    let mut nemenyi = Vec::new();
    for ((strategy, phi), members) in groups {
        let mut datasets: Vec<String> = Vec::new();
        let mut types: Vec<String> = Vec::new();
        for r in &members {
            if !datasets.contains(&r.dataset) {
                datasets.push(r.dataset.clone());
            }
            if !types.contains(&r.network_type) {
                types.push(r.network_type.clone());
            }
        }
        if datasets.len() < 2 || types.len() < 2 {
            tracing::warn!(
                %strategy,
                phi,
                datasets = datasets.len(),
                network_types = types.len(),
                "rank tests need at least two datasets and two network types; skipped"
            );
            continue;
        }

        let mut cells = vec![vec![None; types.len()]; datasets.len()];
        for r in &members {
            let b = datasets.iter().position(|d| *d == r.dataset).expect("collected");
            let t = types.iter().position(|x| *x == r.network_type).expect("collected");
            if cells[b][t].replace(r.total_influenced).is_some() {
                return Err(Error::IncompleteMatrix(format!(
                    "duplicate row for {} / {} / {strategy} / phi {phi}",
                    r.dataset, r.network_type
                )));
            }
        }
        let cells = cells
            .into_iter()
            .zip(&datasets)
            .map(|(row, d)| {
                row.into_iter()
                    .zip(&types)
                    .map(|(c, t)| {
                        c.ok_or_else(|| {
                            Error::IncompleteMatrix(format!("no row for {d} / {t} / {strategy} / phi {phi}"))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let matrix = ResultMatrix::new(datasets, types, cells)?;
        let f = friedman_test(&matrix);
        for (t, r) in f.treatments.iter().zip(&f.mean_ranks) {
            friedman.push(FriedmanRow {
                strategy: strategy.clone(),
                phi,
                network_type: t.clone(),
                mean_rank: *r,
                friedman_p: f.p_value,
            });
        }
        for pair in nemenyi_posthoc(&matrix, clamp) {
            nemenyi.push(NemenyiRow {
                strategy: strategy.clone(),
                phi,
                pair: pair.label(),
                adjusted_p: pair.p_adjusted,
            });
        }
    }
    Ok((friedman, nemenyi))
}

/// Writes rows with a header even when `rows` is empty.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    r.deserialize()
        .collect::<std::result::Result<Vec<SummaryRow>, _>>()
        .map_err(|e| Error::from(e).context(path.display().to_string()))
}

pub const SUMMARY_HEADER: &[&str] = &[
    "dataset",
    "network_type",
    "strategy",
    "phi",
    "seed_count",
    "runs",
    "total_influenced",
    "total_influenced_std",
    "total_influenced_excluding_seeds",
    "seed_digest",
    "cumulative_counts",
];
pub const FRIEDMAN_HEADER: &[&str] = &["strategy", "phi", "network_type", "mean_rank", "friedman_p"];
pub const NEMENYI_HEADER: &[&str] = &["strategy", "phi", "pair", "adjusted_p"];
pub const TURNOVER_HEADER: &[&str] = &[
    "dataset",
    "network_type",
    "strategy",
    "window",
    "turnover_pct",
    "turnover_std_pct",
];

/// Writes `friedman.csv` and `nemenyi.csv` into `dir`.
pub fn write_rank_tests(rows: &[SummaryRow], dir: &Path, clamp: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (friedman, nemenyi) = rank_tests(rows, clamp)?;
    let fp = dir.join("friedman.csv");
    let np = dir.join("nemenyi.csv");
    write_csv(&fp, &friedman, FRIEDMAN_HEADER)?;
    write_csv(&np, &nemenyi, NEMENYI_HEADER)?;
    Ok(vec![fp, np])
}

pub fn write_turnover(records: &[TurnoverRecord], dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("turnover.csv");
    write_csv(&path, &turnover_rows(records), TURNOVER_HEADER)?;
    Ok(path)
}

/// Writes every report file of an experiment into `dir` and returns their
/// paths. The output depends only on the config and the input.
pub fn emit_report(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let summary = summary_rows(result);
    let path = dir.join("summary.csv");
    write_csv(&path, &summary, SUMMARY_HEADER)?;
    written.push(path);

    for rec in &result.records {
        let names =
            |ids: &[crate::NodeId]| -> Vec<String> { ids.iter().map(|&v| result.nodes.name(v).to_owned()).collect() };
        let trace = &rec.trace;
        let file = TraceFile {
            dataset: &rec.dataset,
            network_type: &rec.network_type,
            strategy: rec.strategy.label(),
            phi: rec.phi,
            runs: rec.runs,
            seeds: names(trace.seeds()),
            windows: trace
                .influenced_per_window()
                .iter()
                .enumerate()
                .map(|(l, nodes)| TraceWindow {
                    window: l + 1,
                    newly_influenced: names(nodes),
                    cumulative: trace.cumulative_counts()[l + 1],
                })
                .collect(),
            total_influenced: trace.total_influenced(),
            total_influenced_excluding_seeds: trace.total_influenced_excluding_seeds(),
            mean_total_influenced: rec.total_influenced,
            total_influenced_std: rec.total_influenced_std,
            mean_cumulative_counts: &rec.mean_cumulative_counts,
        };
        let path = dir.join(format!(
            "trace_{}_{}_{}.json",
            rec.network_type,
            rec.strategy.file_stem(),
            rec.phi
        ));
        let out = File::create(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(out), &file)?;
        written.push(path);
    }

    written.extend(write_rank_tests(&summary, dir, result.config.clamp_pvalues)?);
    written.push(write_turnover(&result.turnover, dir)?);
    Ok(written)
}

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{ExperimentConfig, Strategy};
use crate::aggregation::{aggregate, AggregationOptions};
use crate::analysis::{combine_runs, neighbor_turnover, TurnoverReport};
use crate::ingest::{read_event_log, split_halves, EventLog, NodeTable, ParseStats};
use crate::measures::{measure_matrix, MeasureKind, MeasureMatrix};
use crate::propagation::{propagate_lt, PropagationTrace, ThresholdConfig};
use crate::seeding::{random_freq_seeds, random_seeds, rank_nodes, seed_count, select_seeds, SeedSet};
use crate::windowing::{build_tsn, TemporalNetwork};
use crate::Result;

/// Outcome of one (network type, strategy, phi) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub dataset: String,
    /// `TSN<K>`.
    pub network_type: String,
    pub learning_windows: usize,
    pub strategy: Strategy,
    pub phi: f64,
    pub seed_count: usize,
    /// 1 for ranked strategies, `random-runs` for the baselines.
    pub runs: usize,
    /// Mean over runs.
    pub total_influenced: f64,
    /// Sample standard deviation over runs, when there are at least two.
    pub total_influenced_std: Option<f64>,
    pub total_influenced_excluding_seeds: f64,
    /// Mean of `cumulative_counts` over runs, index 0 being the seed count.
    pub mean_cumulative_counts: Vec<f64>,
    /// Short SHA-256 digest of the seed names of every run.
    pub seed_digest: String,
    /// Trace of the first run.
    pub trace: PropagationTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurnoverRecord {
    pub dataset: String,
    pub network_type: String,
    pub learning_windows: usize,
    pub strategy: Strategy,
    pub report: TurnoverReport,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub dataset: String,
    pub nodes: Arc<NodeTable>,
    pub parse_stats: ParseStats,
    pub records: Vec<ExperimentRecord>,
    pub turnover: Vec<TurnoverRecord>,
    /// Wall-clock time; reported on the console only so output files stay
    /// reproducible.
    pub elapsed: Duration,
}

/// Seed sets of one strategy on one learning network.
struct Selection {
    strategy: Strategy,
    seed_count: usize,
    sets: Vec<SeedSet>,
}

struct Learned {
    k: usize,
    tsn: TemporalNetwork,
    selections: Vec<Selection>,
}

struct Prepared {
    dataset: String,
    evaluation: TemporalNetwork,
    learned: Vec<Learned>,
}

fn network_type(k: usize) -> String {
    format!("TSN{k}")
}

/// Parses the configured input and runs every cell of the experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let input = cfg.input.as_ref().expect("validated");
    let parsed = read_event_log(input, cfg.format)?;
    run_on_log(cfg, &parsed.log, parsed.stats)
}

/// Runs the experiment on an already parsed log. `cfg.input` is only used
/// for the default dataset label.
pub fn run_on_log(cfg: &ExperimentConfig, log: &EventLog, stats: ParseStats) -> Result<ExperimentResult> {
    let started = Instant::now();
    let prepared = prepare(cfg, log)?;

    let mut records = Vec::new();
    for learned in &prepared.learned {
        for sel in &learned.selections {
            for &phi in &cfg.phi {
                records.push(
                    propagate_cell(cfg, &prepared, learned, sel, phi).map_err(|e| {
                        e.context(format!("{} / {} / phi {phi}", network_type(learned.k), sel.strategy))
                    })?,
                );
            }
        }
    }
    let turnover = turnover_records(cfg, &prepared)?;

    Ok(ExperimentResult {
        config: cfg.clone(),
        dataset: prepared.dataset,
        nodes: Arc::clone(log.nodes()),
        parse_stats: stats,
        records,
        turnover,
        elapsed: started.elapsed(),
    })
}

/// Seeds every strategy and reports neighbor turnover only, without running
/// the propagation.
pub fn run_turnover(cfg: &ExperimentConfig) -> Result<Vec<TurnoverRecord>> {
    cfg.validate()?;
    let input = cfg.input.as_ref().expect("validated");
    let parsed = read_event_log(input, cfg.format)?;
    turnover_records(cfg, &prepare(cfg, &parsed.log)?)
}

fn prepare(cfg: &ExperimentConfig, log: &EventLog) -> Result<Prepared> {
    cfg.validate_parameters()?;
    let (learning, evaluation) = split_halves(log)?;
    tracing::info!(
        events = log.len(),
        nodes = log.nodes().len(),
        learning = learning.len(),
        evaluation = evaluation.len(),
        "split log"
    );
    let evaluation = build_tsn(&evaluation, cfg.evaluation_windows)?;

    let mut learned = Vec::with_capacity(cfg.learning_windows.len());
    for &k in &cfg.learning_windows {
        let tsn = build_tsn(&learning, k)?;
        let mut matrices: BTreeMap<MeasureKind, MeasureMatrix> = BTreeMap::new();
        let mut selections = Vec::with_capacity(cfg.strategies.len());
        for &strategy in &cfg.strategies {
            if let Strategy::Ranked { measure, .. } = strategy {
                matrices.entry(measure).or_insert_with(|| measure_matrix(&tsn, measure));
            }
            let sel = select(cfg, &tsn, &matrices, strategy)
                .map_err(|e| e.context(format!("{} / {strategy}", network_type(k))))?;
            selections.push(sel);
        }
        tracing::info!(k, nodes = tsn.all_nodes().len(), "seeded learning network");
        learned.push(Learned { k, tsn, selections });
    }

    Ok(Prepared {
        dataset: cfg.dataset_label(),
        evaluation,
        learned,
    })
}

fn select(
    cfg: &ExperimentConfig,
    tsn: &TemporalNetwork,
    matrices: &BTreeMap<MeasureKind, MeasureMatrix>,
    strategy: Strategy,
) -> Result<Selection> {
    let v0 = tsn.all_nodes();
    let m = seed_count(v0.len(), cfg.seed_fraction)?;
    let label = strategy.label();
    let run_seed = |i: usize| cfg.rng_seed.wrapping_add(i as u64);
    let sets = match strategy {
        Strategy::Ranked { measure, aggregation } => {
            let opts = AggregationOptions {
                ef_recency: cfg.ef_recency,
            };
            let scores = aggregate(&matrices[&measure], aggregation, opts);
            let seeds = select_seeds(&rank_nodes(&scores), cfg.seed_fraction)?;
            vec![SeedSet::new(label, seeds.nodes().iter().copied())]
        }
        Strategy::Random => (0..cfg.random_runs)
            .into_par_iter()
            .map(|i| random_seeds(v0, m, run_seed(i)).map(|s| SeedSet::new(&*label, s.nodes().iter().copied())))
            .collect::<Result<_>>()?,
        Strategy::RandomFreq => {
            let occurrences = tsn.occurrences();
            (0..cfg.random_runs)
                .into_par_iter()
                .map(|i| {
                    random_freq_seeds(&occurrences, m, run_seed(i))
                        .map(|s| SeedSet::new(&*label, s.nodes().iter().copied()))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(Selection {
        strategy,
        seed_count: m,
        sets,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_std(xs: &[f64]) -> Option<f64> {
    (xs.len() >= 2).then(|| {
        let m = mean(xs);
        (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    })
}

fn seed_digest(nodes: &NodeTable, sets: &[SeedSet]) -> String {
    let mut hasher = Sha256::new();
    for set in sets {
        for (i, &v) in set.nodes().iter().enumerate() {
            if i > 0 {
                hasher.update(b",");
            }
            hasher.update(nodes.name(v).as_bytes());
        }
        hasher.update(b"\n");
    }
    hex::encode(&hasher.finalize()[..8])
}

fn propagate_cell(
    cfg: &ExperimentConfig,
    prepared: &Prepared,
    learned: &Learned,
    sel: &Selection,
    phi: f64,
) -> Result<ExperimentRecord> {
    let tc = ThresholdConfig {
        within_window_fixpoint: cfg.within_window_fixpoint,
        ..ThresholdConfig::new(phi)?
    };
    let traces: Vec<PropagationTrace> = sel
        .sets
        .par_iter()
        .map(|s| propagate_lt(&prepared.evaluation, s, &tc))
        .collect();

    let totals: Vec<f64> = traces.iter().map(|t| t.total_influenced() as f64).collect();
    let excluding: Vec<f64> = traces
        .iter()
        .map(|t| t.total_influenced_excluding_seeds() as f64)
        .collect();
    let steps = traces[0].cumulative_counts().len();
    let mean_cumulative_counts = (0..steps)
        .map(|i| {
            mean(
                &traces
                    .iter()
                    .map(|t| t.cumulative_counts()[i] as f64)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();

    Ok(ExperimentRecord {
        dataset: prepared.dataset.clone(),
        network_type: network_type(learned.k),
        learning_windows: learned.k,
        strategy: sel.strategy,
        phi,
        seed_count: sel.seed_count,
        runs: traces.len(),
        total_influenced: mean(&totals),
        total_influenced_std: sample_std(&totals),
        total_influenced_excluding_seeds: mean(&excluding),
        mean_cumulative_counts,
        seed_digest: seed_digest(learned.tsn.node_table(), &sel.sets),
        trace: traces.into_iter().next().expect("at least one run"),
    })
}

fn turnover_records(cfg: &ExperimentConfig, prepared: &Prepared) -> Result<Vec<TurnoverRecord>> {
    let opts = cfg.turnover_options();
    let mut out = Vec::new();
    for learned in &prepared.learned {
        let initial = learned.tsn.windows().last();
        for sel in &learned.selections {
            let reports = sel
                .sets
                .par_iter()
                .map(|s| neighbor_turnover(&prepared.evaluation, s, initial, opts))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.context(format!("{} / {}", network_type(learned.k), sel.strategy)))?;
            let report = if reports.len() == 1 {
                reports.into_iter().next().expect("one report")
            } else {
                combine_runs(&reports)
            };
            out.push(TurnoverRecord {
                dataset: prepared.dataset.clone(),
                network_type: network_type(learned.k),
                learning_windows: learned.k,
                strategy: sel.strategy,
                report,
            });
        }
    }
    Ok(out)
}

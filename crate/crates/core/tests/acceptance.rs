//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criterion 6 runs only when `TSEED_FACEBOOK_EDGES` points at the KONECT
//! `out.facebook-wosn-wall` edge list; it is reported but never fails the
//! suite.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use tseed_core::aggregation::{aggregate_row, AggregationKind, AggregationOptions};
use tseed_core::analysis::{friedman_test, nemenyi_posthoc, rank_descending, ResultMatrix};
use tseed_core::experiment::{run_experiment, ExperimentConfig, Strategy};
use tseed_core::ingest::{read_event_log, split_halves, Format};
use tseed_core::measures::{betweenness, closeness};
use tseed_core::propagation::{propagate_lt, ThresholdConfig};
use tseed_core::seeding::{select_seeds, Ranking, SeedSet};
use tseed_core::windowing::build_tsn;
use tseed_core::NodeId;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_windows(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Edges> {
    loop {
        let ws: Vec<Edges> = (0..k).map(|_| random_edges(rng, n, 2 * n)).collect();
        if ws.iter().any(|w| !w.is_empty()) {
            return ws;
        }
    }
}

fn propagation_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for case in 0..200 {
        let n = rng.random_range(2..=10);
        let k = rng.random_range(1..=3);
        let windows = random_windows(&mut rng, n, k);
        let tsn = tsn_from_windows(n, &windows);
        let seeds: BTreeSet<u32> = (0..n as u32).filter(|_| rng.random_bool(0.3)).collect();
        let set = SeedSet::new("s", ids(&seeds));
        for (phi, num, den) in [(0.33, 33, 100), (0.5, 1, 2), (0.75, 3, 4)] {
            let trace = propagate_lt(&tsn, &set, &ThresholdConfig::new(phi).unwrap());
            let want: Vec<Vec<NodeId>> = naive_lt(&windows, &seeds, num, den).iter().map(ids).collect();
            ensure(trace.influenced_per_window() == want.as_slice(), || {
                format!("case {case}, phi {phi}: {windows:?} seeds {seeds:?}")
            })?;
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:.2?}"))?;
    Ok(format!(
        "200 networks x 3 thresholds identical to set re-evaluation in {elapsed:.2?}"
    ))
}

fn aggregation_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let k = rng.random_range(1..=10);
        let row: Vec<f64> = (0..k)
            .map(|_| match rng.random_range(0..4) {
                0 => 0.0,
                1 => rng.random_range(0.0..1.0),
                2 => rng.random_range(0..100) as f64,
                _ => rng.random_range(0.0..=1e6),
            })
            .collect();
        for kind in AggregationKind::ALL {
            for ef_recency in [false, true] {
                let got = aggregate_row(&row, kind, AggregationOptions { ef_recency }).0;
                let err = relative_error(got, naive_aggregate(&row, kind, ef_recency));
                worst = worst.max(err);
                ensure(err <= 1e-12, || format!("{kind} on {row:?}: relative error {err:e}"))?;
            }
        }
    }
    // the two domain extensions on their own
    let sumlog = aggregate_row(&[8.0, 9.0], AggregationKind::SumLog, AggregationOptions::default()).0;
    ensure((sumlog - 12.0).abs() < 1e-12, || format!("SumLog [8, 9] = {sumlog}"))?;
    let zero = aggregate_row(&[0.0, 0.0, 0.0], AggregationKind::MinLog, AggregationOptions::default()).0;
    ensure(zero == 0.0, || format!("MinLog of zeros = {zero}"))?;
    Ok(format!("1000 rows x 12 kinds, worst relative error {worst:e}"))
}

fn centrality_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for case in 0..500 {
        let n = rng.random_range(2..=6);
        let edges = random_edges(&mut rng, n, n * (n - 1));
        let g = graph(&edges);
        let b = brute_betweenness(n, &edges);
        let c = bfs_closeness(n, &edges);
        for ((v, got_b), got_c) in g.nodes().iter().zip(betweenness(&g)).zip(closeness(&g)) {
            let want = b[v.index()];
            ensure((got_b - want).abs() <= 1e-9 * want.max(1.0), || {
                format!("case {case} betweenness of {v}: {got_b} vs {want} on {edges:?}")
            })?;
            ensure((got_c - c[v.index()]).abs() < 1e-12, || {
                format!("case {case} closeness of {v}: {got_c} vs {} on {edges:?}", c[v.index()])
            })?;
        }
    }
    Ok("500 graphs with <= 6 nodes match path enumeration and BFS".into())
}

fn statistics() -> Outcome {
    let m = ResultMatrix::new(
        (1..=5).map(|i| format!("dataset{i}")).collect(),
        vec!["TSN10".into(), "TSN5".into(), "TSN1".into()],
        vec![vec![300.0, 200.0, 100.0]; 5],
    )
    .unwrap();
    let f = friedman_test(&m);
    ensure((f.statistic - 10.0).abs() < 1e-9, || format!("chi2 = {}", f.statistic))?;
    ensure((f.p_value - 0.0067).abs() <= 1e-3, || format!("p = {}", f.p_value))?;
    let oracle_p = ChiSquared::new(2.0).unwrap().sf(10.0);
    ensure((f.p_value - oracle_p).abs() < 1e-10, || {
        format!("p = {} vs statrs {oracle_p}", f.p_value)
    })?;

    let pairs = nemenyi_posthoc(&m, false);
    let extreme = pairs.iter().find(|p| p.label() == "TSN10 vs TSN1").unwrap();
    ensure((extreme.p_adjusted - 0.0047).abs() <= 1e-3, || {
        format!("adjusted p = {}", extreme.p_adjusted)
    })?;
    let z = 2.0 / (3.0 * 4.0 / 30.0f64).sqrt();
    let oracle_adj = 3.0 * 2.0 * Normal::standard().sf(z);
    ensure((extreme.p_adjusted - oracle_adj).abs() < 1e-9, || {
        format!("adjusted p = {} vs statrs {oracle_adj}", extreme.p_adjusted)
    })?;
    Ok(format!(
        "chi2 = {:.6}, p = {:.6}, TSN10 vs TSN1 adjusted p = {:.6}",
        f.statistic, f.p_value, extreme.p_adjusted
    ))
}

fn granularity_ordering() -> Outcome {
    let input = fixture("bursty.edges");
    let parsed = read_event_log(&input, Format::Konect).map_err(|e| e.to_string())?;
    let nodes = parsed.log.nodes().len();
    ensure(nodes >= 200, || format!("fixture has {nodes} nodes"))?;
    let (learning, evaluation) = split_halves(&parsed.log).map_err(|e| e.to_string())?;
    let windows = build_tsn(&learning, 10).unwrap().len() + build_tsn(&evaluation, 10).unwrap().len();
    ensure(windows == 20, || format!("{windows} windows"))?;

    let mut report = Vec::new();
    for ef_recency in [false, true] {
        let cfg = ExperimentConfig {
            input: Some(input.clone()),
            learning_windows: vec![10, 5, 1],
            evaluation_windows: 10,
            strategies: vec![Strategy::OUT_EXP],
            phi: vec![0.75],
            ef_recency,
            ..Default::default()
        };
        let result = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let total = |net: &str| {
            result
                .records
                .iter()
                .find(|r| r.network_type == net)
                .map(|r| r.total_influenced)
                .unwrap()
        };
        let (t10, t5, t1) = (total("TSN10"), total("TSN5"), total("TSN1"));
        ensure(t10 > t5 && t5 > t1, || {
            format!("ef_recency={ef_recency}: TSN10 {t10}, TSN5 {t5}, TSN1 {t1}")
        })?;
        report.push(format!("{t10} > {t5} > {t1}"));
    }
    Ok(format!(
        "{nodes} nodes; OutExp at phi 0.75: {} (EF as printed), {} (recency EF)",
        report[0], report[1]
    ))
}

fn full_scale() -> Option<Outcome> {
    let path = std::env::var_os("TSEED_FACEBOOK_EDGES")?;
    let cfg = ExperimentConfig {
        input: Some(path.into()),
        learning_windows: vec![10, 1],
        strategies: vec![Strategy::OUT_EXP],
        phi: vec![0.75],
        ..Default::default()
    };
    Some((|| {
        let result = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let t10 = result.records[0].total_influenced;
        let t1 = result.records[1].total_influenced;
        ensure(t10 > t1, || format!("TSN10 {t10} <= TSN1 {t1}"))?;
        let within = |got: f64, want: f64| (got - want).abs() <= 0.1 * want;
        ensure(within(t10, 3512.0) && within(t1, 1500.0), || {
            format!("TSN10 {t10} (reference 3512), TSN1 {t1} (reference 1500)")
        })?;
        Ok(format!("TSN10 {t10} > TSN1 {t1}, both within 10% of the reference"))
    })())
}

fn property_suites() -> Outcome {
    const CASES: usize = 150;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);

    for case in 0..CASES {
        let windows = random_windows(&mut rng, 8, 3);
        let tsn = tsn_from_windows(8, &windows);
        let a: BTreeSet<u32> = (0..8).filter(|_| rng.random_bool(0.25)).collect();
        let b: BTreeSet<u32> = a
            .iter()
            .copied()
            .chain((0..8).filter(|_| rng.random_bool(0.25)))
            .collect();
        let cfg = ThresholdConfig::new(0.5).unwrap();
        let ta = propagate_lt(&tsn, &SeedSet::new("a", ids(&a)), &cfg).total_influenced();
        let tb = propagate_lt(&tsn, &SeedSet::new("b", ids(&b)), &cfg).total_influenced();
        ensure(ta <= tb, || format!("seed monotonicity, case {case}: {ta} > {tb}"))?;
    }

    for case in 0..CASES {
        let windows = random_windows(&mut rng, 10, 3);
        let tsn = tsn_from_windows(10, &windows);
        let seeds: BTreeSet<u32> = (0..10).filter(|_| rng.random_bool(0.3)).collect();
        let set = SeedSet::new("s", ids(&seeds));
        let totals: Vec<usize> = [0.2, 0.33, 0.5, 0.75, 1.0]
            .iter()
            .map(|&phi| propagate_lt(&tsn, &set, &ThresholdConfig::new(phi).unwrap()).total_influenced())
            .collect();
        ensure(totals.windows(2).all(|w| w[0] >= w[1]), || {
            format!("phi monotonicity, case {case}: {totals:?}")
        })?;
    }

    for case in 0..CASES {
        let n = rng.random_range(1..60);
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..30) as f64).collect();
        let rank = |f: &dyn Fn(f64) -> f64| -> Vec<NodeId> {
            Ranking::from_scores("r", scores.iter().enumerate().map(|(i, &s)| (NodeId(i as u32), f(s))))
                .nodes()
                .collect()
        };
        ensure(rank(&|x| x) == rank(&|x| (x * 0.3).exp() - 4.0), || {
            format!("argsort invariance, case {case}")
        })?;

        let r = Ranking::from_scores("r", scores.iter().enumerate().map(|(i, &s)| (NodeId(i as u32), s)));
        let (f, g) = (rng.random_range(0.01..1.0), rng.random_range(0.01..1.0));
        let (lo, hi) = if f <= g { (f, g) } else { (g, f) };
        ensure(
            select_seeds(&r, lo).unwrap().is_subset(&select_seeds(&r, hi).unwrap()),
            || format!("prefix monotonicity, case {case}: {lo} vs {hi}"),
        )?;
    }

    for case in 0..CASES {
        let k = rng.random_range(2..=6);
        let row: Vec<f64> = (0..k).map(|_| rng.random_range(0..4) as f64).collect();
        let sum: f64 = rank_descending(&row).iter().sum();
        ensure(sum == (k * (k + 1)) as f64 / 2.0, || {
            format!("rank-sum identity, case {case}: {row:?}")
        })?;
    }

    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:.2?}"))?;
    Ok(format!("5 properties x {CASES} instances in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let gating: [Criterion; 6] = [
        (1, "propagation oracle equivalence", propagation_oracle),
        (2, "aggregation oracle equivalence", aggregation_oracle),
        (3, "betweenness and closeness correctness", centrality_oracle),
        (4, "Friedman and Nemenyi reproduction", statistics),
        (5, "granularity ordering on the bursty fixture", granularity_ordering),
        (7, "property suites", property_suites),
    ];
    let mut failed = 0;
    for (id, name, check) in gating {
        match check() {
            Ok(detail) => println!("PASS  criterion {id}: {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {id}: {name}: {detail}");
            }
        }
    }
    match full_scale() {
        None => println!("SKIP  criterion 6: full-scale run (set TSEED_FACEBOOK_EDGES to enable; not gating)"),
        Some(Ok(detail)) => println!("PASS  criterion 6: full-scale run: {detail}"),
        Some(Err(detail)) => println!("FAIL  criterion 6: full-scale run (not gating): {detail}"),
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} gating criteria failed");
        ExitCode::FAILURE
    }
}

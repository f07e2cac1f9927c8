use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn tseed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tseed")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    fs::write(&path, body).unwrap();
    path
}

fn base_config(input: &Path, output: &Path) -> String {
    format!(
        "input = {:?}\noutput = {:?}\nlearning-windows = [10, 1]\nstrategies = [\"outexp\", \"random\"]\nphi = [0.75]\nrandom-runs = 4\nrng-seed = 3\n",
        input.display().to_string(),
        output.display().to_string()
    )
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let cfg = write_config(dir.path(), &base_config(&fixture("bursty.edges"), &out));
    let o = tseed(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "summary.csv",
        "friedman.csv",
        "nemenyi.csv",
        "turnover.csv",
        "trace_TSN10_outexp_0.75.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("OutExp"));
}

#[test]
fn flags_override_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let other = dir.path().join("elsewhere");
    let cfg = write_config(dir.path(), &base_config(&fixture("bursty.edges"), &out));
    let o = tseed(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        other.to_str().unwrap(),
        "--strategies",
        "bethyp,closeness:lf",
        "--phi",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
    let summary = fs::read_to_string(other.join("summary.csv")).unwrap();
    assert!(summary.contains(",BetHyp,0.5,"));
    assert!(summary.contains(",closeness:lf,0.5,"));
    assert!(!summary.contains("Random"));
}

#[test]
fn config_errors_exit_1_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let body =
        base_config(&fixture("bursty.edges"), &out).replace("strategies = [\"outexp\", \"random\"]", "strategies = []");
    let cfg = write_config(dir.path(), &body);
    let o = tseed(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("strategies"));
    assert!(!out.exists());

    let o = tseed(&["run", "--config", cfg.to_str().unwrap(), "--strategies", "greedy"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tseed(&["run", "--input", "x.txt", "--phi", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tseed(&["run", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "% nothing usable\nfoo bar\na a 3\n").unwrap();
    let out = dir.path().join("results");
    let o = tseed(&[
        "run",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));

    let o = tseed(&["run", "--input", dir.path().join("absent").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_combines_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let mut summaries = Vec::new();
    for (i, edges) in ["bursty.edges", "tiny.edges", "bursty.edges"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let o = tseed(&[
            "run",
            "--input",
            fixture(edges).to_str().unwrap(),
            "--dataset",
            &format!("d{i}"),
            "--learning-windows",
            "3,1",
            "--evaluation-windows",
            "3",
            "--strategies",
            "outexp",
            "--phi",
            "0.5",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        summaries.push(out.join("summary.csv"));
    }
    let stats_dir = dir.path().join("stats");
    let mut args = vec!["stats".to_string(), "--output".into(), stats_dir.display().to_string()];
    for s in &summaries {
        args.push("--summary".into());
        args.push(s.display().to_string());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_tseed")).args(&args).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let friedman = fs::read_to_string(stats_dir.join("friedman.csv")).unwrap();
    assert_eq!(friedman.lines().count(), 3);
    assert!(friedman.lines().nth(1).unwrap().starts_with("OutExp,0.5,TSN3,"));
    let nemenyi = fs::read_to_string(stats_dir.join("nemenyi.csv")).unwrap();
    assert!(nemenyi.contains("TSN3 vs TSN1"));
}

#[test]
fn turnover_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = tseed(&[
        "turnover",
        "--input",
        fixture("bursty.edges").to_str().unwrap(),
        "--strategies",
        "outexp",
        "--learning-windows",
        "10",
        "--turnover-baseline",
        "first",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("turnover.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 11);
    assert!(text.lines().last().unwrap().contains(",mean,"));
    assert!(!out.join("summary.csv").exists());
}

//! The `isocount` binary: output format, exit codes, determinism, resume.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use isocount::cli::{checkpoint_roundtrip, Checkpoint, CHECKPOINT_HEADER};
use isocount::counting::{census, Engine};

fn isocount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isocount")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn census_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = isocount(&["census", "--n", "2", "--x", "1e5", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let expected = census(2, 100_000).unwrap().count;
    assert_eq!(fs::read_to_string(&out).unwrap(), format!("N,X,count,engine\n2,100000,{expected},census\n"));
}

#[test]
fn grid_rows_are_sorted() {
    let o = isocount(&["param", "--n", "6,3", "--x-grid", "1e3,1e4"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let keys: Vec<(u32, u64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f[3], "param");
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(keys, vec![(3, 1000), (3, 10_000), (6, 1000), (6, 10_000)]);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| isocount(args).status.code().unwrap();
    assert_eq!(code(&["census", "--n", "7", "--x", "1e3"]), 4);
    assert_eq!(code(&["param", "--n", "2", "--x", "1e3"]), 4);
    assert_eq!(code(&["quadric5", "--n", "3", "--x", "1e3"]), 4);
    assert_eq!(code(&["census", "--n", "2", "--x-grid", "1e4,1e3"]), 2);
    assert_eq!(code(&["census", "--n", "2", "--x", "1.5"]), 2);
    assert_eq!(code(&["census", "--n", "2"]), 2);
    assert_eq!(code(&["census", "--n", "2", "--x", "10", "--threads", "0"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["census", "--n", "2", "--x", "1e3", "--out", "/nonexistent-dir/c.csv"]), 3);
    assert_eq!(code(&["fit", "--in", "/nonexistent-dir/c.csv"]), 3);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn distinct_diagnostics() {
    let err = |args: &[&str]| String::from_utf8(isocount(args).stderr).unwrap();
    let level = err(&["census", "--n", "7", "--x", "1e3"]);
    let grid = err(&["census", "--n", "2", "--x-grid", "1e4,1e3"]);
    let path = err(&["census", "--n", "2", "--x", "1e3", "--out", "/nonexistent-dir/c.csv"]);
    assert!(level.contains("N=7"));
    assert!(grid.contains("grid"));
    assert!(path.contains("/nonexistent-dir/c.csv"));
}

#[test]
fn fit_refuses_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, "N,X,count,engine\n2,1000000,3790,census\n").unwrap();
    let o = isocount(&["fit", "--in", path_str(&input)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("need ≥ 4 samples"));
}

#[test]
fn fit_reads_a_census_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let o = isocount(&["census", "--n", "3", "--x-grid", "1e4,1e5,1e6,1e7", "--out", path_str(&csv)]);
    assert!(o.status.success());
    let o = isocount(&["fit", "--in", path_str(&csv), "--betas", "0"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..2], ["3", "census"]);
    let alpha: f64 = row[2].parse().unwrap();
    assert!((alpha - 0.5).abs() < 0.06, "{alpha}");
}

#[test]
fn identical_csv_for_any_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4", "16"] {
        let out = dir.path().join(format!("t{threads}.csv"));
        let o = isocount(&[
            "census", "--n", "2,3,4", "--x-grid", "1e3,1e4,1e5", "--threads", threads, "--out",
            path_str(&out),
        ]);
        assert!(o.status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

/// Stop after `k` partitions for every `k`, then resume to completion.
#[test]
fn resume_after_any_partition_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let straight = dir.path().join("straight.csv");
    let base = ["census", "--n", "2", "--x", "1e6", "--partitions", "8", "--threads", "4"];
    let mut args = base.to_vec();
    args.extend(["--out", path_str(&straight)]);
    assert!(isocount(&args).status.success());
    let expected = fs::read(&straight).unwrap();

    for k in 1..8 {
        let ckpt = dir.path().join(format!("k{k}.ckpt"));
        let out = dir.path().join(format!("k{k}.csv"));
        let mut args = base.to_vec();
        args.extend(["--checkpoint", path_str(&ckpt), "--out", path_str(&out)]);
        let stop_at = k.to_string();
        let mut stopped = args.clone();
        stopped.extend(["--stop-after", &stop_at]);
        let o = isocount(&stopped);
        assert_eq!(o.status.code(), Some(1), "k={k}");
        assert!(!out.exists());
        let saved = fs::read_to_string(&ckpt).unwrap();
        assert!(saved.starts_with(CHECKPOINT_HEADER));
        let done = saved.lines().skip(1).filter(|l| l.ends_with(" 1")).count();
        assert_eq!(done, k, "k={k}");

        let mut resumed = args.clone();
        resumed.push("--resume");
        assert!(isocount(&resumed).status.success(), "k={k}");
        assert_eq!(fs::read(&out).unwrap(), expected, "k={k}");
    }
}

#[test]
fn resume_refuses_a_foreign_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c.ckpt");
    fs::write(&ckpt, "isogeny-census-ckpt v0\ncensus 2 1000 0 5 1\n").unwrap();
    let o = isocount(&["census", "--n", "2", "--x", "1e3", "--checkpoint", path_str(&ckpt), "--resume"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("version"));
    assert!(o.stdout.is_empty());
}

#[test]
fn checkpoint_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.ckpt");
    let fresh = Checkpoint::fresh(Engine::Stack, 9, 10u64.pow(12), 16);
    assert_eq!(checkpoint_roundtrip(&fresh, &path).unwrap(), fresh);
    let mut partial = fresh.clone();
    partial.record(0, 3);
    partial.record(15, 11);
    assert_eq!(checkpoint_roundtrip(&partial, &path).unwrap(), partial);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# census settings\nn = 3\nx-grid = 1e3,1e4\nthreads = 2\n").unwrap();
    let o = isocount(&["census", "--config", path_str(&conf), "--n", "2"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.starts_with("2,")));
    assert_eq!(text.lines().count(), 3);
    fs::write(&conf, "n 3\n").unwrap();
    assert_eq!(isocount(&["census", "--config", path_str(&conf)]).status.code(), Some(2));
}

#[test]
fn plot_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let svg = dir.path().join("c.svg");
    let o = isocount(&["census", "--n", "2,3", "--x-grid", "1e3,1e4,1e5", "--out", path_str(&csv)]);
    assert!(o.status.success());
    assert!(isocount(&["plot", "--in", path_str(&csv), "--out", path_str(&svg)]).status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 2);

    fs::write(&csv, "N,X,count,engine\n2,1000,5,census\n").unwrap();
    assert_eq!(isocount(&["plot", "--in", path_str(&csv), "--out", path_str(&svg)]).status.code(), Some(2));
}

#[test]
fn summatory_and_registry_print() {
    let o = isocount(&["summatory", "--t", "1e3,1e4"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("T,value,ratio\n1000,"));
    let o = isocount(&["registry"]);
    assert!(o.status.success());
    assert!(!o.stdout.is_empty());
}

#[test]
fn table1_reports_every_level() {
    let o = isocount(&["table1", "--xmax", "1e6", "--xmax-cheap", "1e12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let levels: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(levels, ["2", "3", "4", "5", "6", "8", "9", "12", "16", "18"]);
}

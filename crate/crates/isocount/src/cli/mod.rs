//! Command-line surface: run the engines with checkpoints, export CSV and
//! SVG, and reproduce the exponent table.
//!
//! Only the thread that calls [`run`] touches files. Workers on the rayon
//! pool count whole partitions and report back over a channel.

pub mod checkpoint;
pub mod plot;
pub mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analytic::{expected_growth, fit_growth, summatory_b4, TABLE1};
use crate::counting::{build_job, split_range, CensusResult, Engine, DEFAULT_PARTITIONS};
use crate::error::Error;

pub use checkpoint::{checkpoint_roundtrip, Checkpoint, PartitionState, CHECKPOINT_HEADER};
pub use plot::{render_plot, render_svg};
pub use table::{parse_csv, parse_grid, parse_x, read_csv, render_csv, write_csv, CSV_HEADER};

/// Failures surfaced to the shell, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("unsupported level N={0}")]
    UnsupportedLevel(u32),
    #[error("computation failed: {0}")]
    Compute(Error),
    #[error("stopped after {0} partitions; checkpoint saved")]
    Interrupted(usize),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::UnsupportedLevel(_) => 4,
            CliError::Compute(_) | CliError::Interrupted(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedLevel(n) => CliError::UnsupportedLevel(n),
            Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Compute(other),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "isocount", version, about = "Count elliptic curves over Q with a rational cyclic N-isogeny")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brute-force census of minimal short Weierstrass models.
    Census(RunArgs),
    /// Enumeration of twist families.
    Param(RunArgs),
    /// Integer section-tuple counts.
    Stack(RunArgs),
    /// Section-tuple count at level 5.
    Quadric5(RunArgs),
    /// Summatory function of B(n⁴) and its ratio to T (log T)².
    Summatory(SummatoryArgs),
    /// Fit X^α (log X)^β to counts read from a CSV.
    Fit(FitArgs),
    /// Fitted exponents for every supported level.
    Table1(Table1Args),
    /// Print the modular-curve and family registry.
    Registry,
    /// Log-log SVG of counts read from a CSV.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Levels, comma-separated.
    #[arg(long = "n")]
    n: Option<String>,
    /// Single height bound, e.g. 1e6.
    #[arg(long)]
    x: Option<String>,
    /// Strictly increasing height bounds, comma-separated.
    #[arg(long = "x-grid")]
    x_grid: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<String>,
    /// Partitions of the outer loop per job.
    #[arg(long)]
    partitions: Option<String>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the file given by --checkpoint.
    #[arg(long)]
    resume: bool,
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stop after this many partitions (resume testing).
    #[arg(long = "stop-after", hide = true)]
    stop_after: Option<usize>,
}

#[derive(Args, Debug)]
struct SummatoryArgs {
    /// Upper limits T, comma-separated.
    #[arg(long = "t", default_value = "1e6,1e7")]
    t: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Candidate log powers.
    #[arg(long, default_value = "0,1,2")]
    betas: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Table1Args {
    /// Largest height bound of the decade grid starting at 1e3.
    #[arg(long, default_value = "1e6")]
    xmax: String,
    /// Largest bound for the levels served by the cheap engines (level 5
    /// and the family levels 12, 16, 18), on a decade grid from 1e6.
    #[arg(long = "xmax-cheap", default_value = "1e18")]
    xmax_cheap: String,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// Parse `argv` (program name first), run, print diagnostics and return the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("isocount: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Census(a) => run_engine(Engine::Census, a, None),
        Command::Param(a) => run_engine(Engine::Param, a, None),
        Command::Stack(a) => run_engine(Engine::Stack, a, None),
        Command::Quadric5(a) => run_engine(Engine::Stack, a, Some(5)),
        Command::Summatory(a) => summatory(a),
        Command::Fit(a) => fit(a),
        Command::Table1(a) => table1(a),
        Command::Registry => emit(&crate::families::registry_dump(), None),
        Command::Plot(a) => {
            let rows = read_csv(&a.input)?;
            render_plot(&rows, &a.out)
        }
    }
}

/// Settings of an engine run after merging the config file and the flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub engine: Engine,
    pub levels: Vec<u32>,
    pub x_grid: Vec<u64>,
    pub threads: usize,
    pub partitions: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub resume: bool,
    pub out_path: Option<PathBuf>,
}

fn resolve(engine: Engine, a: RunArgs, fixed_level: Option<u32>) -> Result<Config, CliError> {
    let file = match &a.config {
        Some(p) => table::read_config(p)?,
        None => BTreeMap::new(),
    };
    if let Some(k) = file.keys().find(|k| {
        !matches!(
            k.as_str(),
            "n" | "x" | "x_grid" | "out" | "threads" | "partitions" | "checkpoint" | "resume"
        )
    }) {
        return Err(CliError::Usage(format!("unknown config key '{k}'")));
    }
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

    let levels = match (pick(a.n, "n"), fixed_level) {
        (Some(s), Some(f)) => {
            let l = table::parse_levels(&s)?;
            if let Some(&bad) = l.iter().find(|&&n| n != f) {
                return Err(CliError::UnsupportedLevel(bad));
            }
            l
        }
        (Some(s), None) => table::parse_levels(&s)?,
        (None, Some(f)) => vec![f],
        (None, None) => return Err(CliError::Usage("missing --n".into())),
    };
    let x_grid = match (pick(a.x, "x"), pick(a.x_grid, "x_grid")) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give --x or --x-grid, not both".into())),
        (Some(x), None) => vec![parse_x(&x)?],
        (None, Some(g)) => parse_grid(&g)?,
        (None, None) => return Err(CliError::Usage("missing --x or --x-grid".into())),
    };
    let positive = |s: Option<String>, what: &str, default: usize| -> Result<usize, CliError> {
        match s {
            None => Ok(default),
            Some(s) => match s.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(CliError::Usage(format!("--{what} must be a positive integer, got '{s}'"))),
            },
        }
    };
    let threads = positive(pick(a.threads, "threads"), "threads", rayon::current_num_threads())?;
    let partitions = positive(pick(a.partitions, "partitions"), "partitions", DEFAULT_PARTITIONS)?;
    let resume = a.resume
        || match file.get("resume").map(String::as_str) {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(v) => return Err(CliError::Usage(format!("resume must be true or false, got '{v}'"))),
        };
    let checkpoint_path = a.checkpoint.or_else(|| file.get("checkpoint").map(PathBuf::from));
    if resume && checkpoint_path.is_none() {
        return Err(CliError::Usage("--resume needs --checkpoint".into()));
    }
    let out_path = a.out.or_else(|| file.get("out").map(PathBuf::from));
    Ok(Config { engine, levels, x_grid, threads, partitions, checkpoint_path, resume, out_path })
}

fn run_engine(engine: Engine, a: RunArgs, fixed_level: Option<u32>) -> Result<(), CliError> {
    let stop_after = a.stop_after;
    let cfg = resolve(engine, a, fixed_level)?;
    let rows = execute(&cfg, stop_after)?;
    let text = render_csv(&rows)?;
    emit(&text, cfg.out_path.as_deref())
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

/// Run every `(N, X)` job of `cfg`, honouring the checkpoint. With
/// `stop_after = Some(k)` the run saves its progress after `k` newly
/// finished partitions and returns [`CliError::Interrupted`].
pub fn execute(cfg: &Config, stop_after: Option<usize>) -> Result<Vec<CensusResult>, CliError> {
    // build every job up front so an unsupported level fails before any work
    let mut jobs = Vec::new();
    for &level in &cfg.levels {
        for &x in &cfg.x_grid {
            jobs.push((level, x, build_job(cfg.engine, level, x)?));
        }
    }
    let mut states: Vec<Checkpoint> = jobs
        .iter()
        .map(|(level, x, _)| Checkpoint::fresh(cfg.engine, *level, *x, cfg.partitions))
        .collect();
    if cfg.resume {
        let path = cfg.checkpoint_path.as_deref().expect("checked in resolve");
        if path.exists() {
            for saved in checkpoint::load(path)? {
                if let Some(s) = states.iter_mut().find(|s| s.matches(saved.engine, saved.level, saved.x)) {
                    if saved.partitions.len() != cfg.partitions {
                        return Err(CliError::Usage(format!(
                            "checkpoint has {} partitions for N={} X={}, this run uses {}",
                            saved.partitions.len(),
                            saved.level,
                            saved.x,
                            cfg.partitions
                        )));
                    }
                    *s = saved;
                }
            }
        }
    }
    let pool = thread_pool(cfg.threads)?;
    let mut finished = 0usize;
    let mut rows = Vec::with_capacity(jobs.len());
    for (k, (level, x, job)) in jobs.iter().enumerate() {
        let start = Instant::now();
        let pieces = split_range(job.outer_range(), cfg.partitions);
        let pending: Vec<(usize, (i64, i64))> =
            pieces.into_iter().enumerate().filter(|(id, _)| !states[k].partitions[*id].done).collect();
        let cancel = AtomicBool::new(false);
        let (tx, rx) = mpsc::channel::<(usize, crate::Result<u64>)>();
        let job: &dyn crate::counting::Enumeration = job.as_ref();
        let mut failure: Option<CliError> = None;
        std::thread::scope(|scope| {
            let cancel = &cancel;
            let pool = &pool;
            scope.spawn(move || {
                pool.install(|| {
                    pending.into_par_iter().for_each_with(tx, |tx, (id, (lo, hi))| {
                        if cancel.load(Ordering::Relaxed) {
                            return;
                        }
                        let r = if lo > hi { Ok(0) } else { job.count_range(lo, hi) };
                        let _ = tx.send((id, r));
                    })
                })
            });
            for (id, r) in rx {
                if cancel.load(Ordering::Relaxed) {
                    continue;
                }
                match r {
                    Ok(c) => {
                        states[k].record(id, c);
                        finished += 1;
                        if let Some(path) = &cfg.checkpoint_path {
                            if let Err(e) = checkpoint::save(&states, path) {
                                failure = Some(e);
                                cancel.store(true, Ordering::Relaxed);
                                continue;
                            }
                        }
                        if stop_after.is_some_and(|s| finished >= s) {
                            failure = Some(CliError::Interrupted(finished));
                            cancel.store(true, Ordering::Relaxed);
                        }
                    }
                    Err(e) => {
                        failure = Some(e.into());
                        cancel.store(true, Ordering::Relaxed);
                    }
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        debug_assert!(states[k].is_complete());
        rows.push(CensusResult {
            level: *level,
            x: *x,
            count: states[k].done_total(),
            engine: cfg.engine,
            elapsed: start.elapsed().as_secs_f64(),
        });
    }
    if let Some(path) = &cfg.checkpoint_path {
        checkpoint::save(&states, path)?;
    }
    Ok(rows)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn summatory(a: SummatoryArgs) -> Result<(), CliError> {
    let ts = parse_grid(&a.t)?;
    let mut text = String::from("T,value,ratio\n");
    for t in ts {
        if t < 3 {
            return Err(CliError::Usage("T must be at least 3".into()));
        }
        let v = summatory_b4(t);
        let tf = t as f64;
        text.push_str(&format!("{t},{v},{:.6}\n", v as f64 / (tf * tf.ln().powi(2))));
    }
    emit(&text, a.out.as_deref())
}

fn parse_betas(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(b) if b <= 2 => Ok(b),
            _ => Err(CliError::Usage(format!("log power must be 0, 1 or 2, got '{t}'"))),
        })
        .collect()
}

fn fit(a: FitArgs) -> Result<(), CliError> {
    let betas = parse_betas(&a.betas)?;
    let rows = read_csv(&a.input)?;
    if rows.is_empty() {
        return Err(CliError::Usage("need ≥ 4 samples, got 0".into()));
    }
    let mut series: BTreeMap<(u32, Engine), Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        series.entry((r.level, r.engine)).or_default().push((r.x as f64, r.count as f64));
    }
    let mut text = String::from("N,engine,alpha,beta,c,residual\n");
    for ((level, engine), samples) in series {
        let f = fit_growth(&samples, &betas)
            .map_err(|e| CliError::Usage(format!("N={level} {engine}: {e}")))?;
        text.push_str(&format!(
            "{level},{engine},{:.6},{},{:.6e},{:.6e}\n",
            f.alpha, f.beta, f.c, f.residual
        ));
    }
    emit(&text, a.out.as_deref())
}

/// Engine used for each level of the exponent table.
pub fn table1_engine(level: u32) -> Engine {
    match level {
        5 => Engine::Stack,
        12 | 16 | 18 => Engine::Param,
        _ => Engine::Census,
    }
}

/// Decades `lo, 10·lo, ...` up to `hi`.
fn decade_grid(lo: u64, hi: u64) -> Vec<u64> {
    std::iter::successors(Some(lo), |x| x.checked_mul(10)).take_while(|&x| x <= hi).collect()
}

fn table1(a: Table1Args) -> Result<(), CliError> {
    let grid = decade_grid(1000, parse_x(&a.xmax)?);
    if grid.is_empty() {
        return Err(CliError::Usage("--xmax must be at least 1e3".into()));
    }
    let cheap_grid = decade_grid(1_000_000, parse_x(&a.xmax_cheap)?);
    if cheap_grid.is_empty() {
        return Err(CliError::Usage("--xmax-cheap must be at least 1e6".into()));
    }
    let threads = match a.threads {
        None => rayon::current_num_threads(),
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::Usage(format!("--threads must be a positive integer, got '{s}'")))?,
    };
    let pool = thread_pool(threads)?;
    let mut text = String::from("N,engine,alpha_expected,beta_expected,alpha_fit,beta_fit,samples\n");
    for &(level, _, _) in TABLE1.iter() {
        let engine = table1_engine(level);
        let grid = if engine == Engine::Census { &grid } else { &cheap_grid };
        let counts: Vec<CensusResult> = pool.install(|| {
            grid.iter().map(|&x| crate::counting::run(engine, level, x)).collect::<crate::Result<_>>()
        })?;
        let samples: Vec<(f64, f64)> =
            counts.iter().filter(|r| r.count > 0).map(|r| (r.x as f64, r.count as f64)).collect();
        let (alpha, beta) = expected_growth(level).expect("table level");
        let fitted = match fit_growth(&samples, &[0, 1, 2]) {
            Ok(f) => format!("{:.4},{}", f.alpha, f.beta),
            Err(_) => "insufficient data,insufficient data".to_string(),
        };
        text.push_str(&format!("{level},{engine},{alpha:.4},{beta},{fitted},{}\n", samples.len()));
    }
    emit(&text, a.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(n: &str, x: &str) -> RunArgs {
        RunArgs { n: Some(n.into()), x: Some(x.into()), ..Default::default() }
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let conf = dir.path().join("run.conf");
        std::fs::write(&conf, "# test\nn=2,3\nx-grid=1e3,1e4\nthreads=3\n").unwrap();
        let a = RunArgs { config: Some(conf.clone()), threads: Some("2".into()), ..Default::default() };
        let c = resolve(Engine::Census, a, None).unwrap();
        assert_eq!(c.levels, vec![2, 3]);
        assert_eq!(c.x_grid, vec![1000, 10_000]);
        assert_eq!(c.threads, 2);
        std::fs::write(&conf, "bogus=1\n").unwrap();
        let a = RunArgs { config: Some(conf), ..args("2", "10") };
        assert!(matches!(resolve(Engine::Census, a, None), Err(CliError::Usage(_))));
    }

    #[test]
    fn level_five_only_for_quadric() {
        assert_eq!(resolve(Engine::Stack, RunArgs { x: Some("1e6".into()), ..Default::default() }, Some(5)).unwrap().levels, vec![5]);
        assert!(matches!(resolve(Engine::Stack, args("4", "1e6"), Some(5)), Err(CliError::UnsupportedLevel(4))));
    }

    #[test]
    fn resumed_run_matches_a_straight_one() {
        let dir = tempfile::tempdir().unwrap();
        let ck = dir.path().join("c.ckpt");
        let mut cfg = resolve(Engine::Census, args("2", "1e4"), None).unwrap();
        cfg.partitions = 8;
        cfg.threads = 2;
        let straight = execute(&cfg, None).unwrap();
        cfg.checkpoint_path = Some(ck.clone());
        cfg.resume = true;
        for _ in 0..20 {
            match execute(&cfg, Some(3)) {
                Err(CliError::Interrupted(_)) => continue,
                Ok(rows) => {
                    assert_eq!(rows[0].count, straight[0].count);
                    return;
                }
                Err(e) => panic!("{e}"),
            }
        }
        panic!("resume did not converge");
    }
}

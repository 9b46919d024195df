//! Plain-text checkpoints: one line per outer-loop partition.

use std::fs;
use std::path::Path;

use crate::counting::Engine;

use super::CliError;

pub const CHECKPOINT_HEADER: &str = "isogeny-census-ckpt v1";

/// State of one partition of a job.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionState {
    pub id: usize,
    pub partial_count: u64,
    pub done: bool,
}

/// Progress of one `(engine, N, X)` job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub engine: Engine,
    pub level: u32,
    pub x: u64,
    pub partitions: Vec<PartitionState>,
}

impl Checkpoint {
    /// All partitions pending.
    pub fn fresh(engine: Engine, level: u32, x: u64, parts: usize) -> Self {
        let partitions =
            (0..parts).map(|id| PartitionState { id, partial_count: 0, done: false }).collect();
        Checkpoint { engine, level, x, partitions }
    }

    pub fn matches(&self, engine: Engine, level: u32, x: u64) -> bool {
        self.engine == engine && self.level == level && self.x == x
    }

    pub fn is_complete(&self) -> bool {
        self.partitions.iter().all(|p| p.done)
    }

    /// Sum over finished partitions.
    pub fn done_total(&self) -> u64 {
        self.partitions.iter().filter(|p| p.done).map(|p| p.partial_count).sum()
    }

    /// Record a finished partition; a partition already done keeps its count.
    pub fn record(&mut self, id: usize, count: u64) {
        let p = &mut self.partitions[id];
        if !p.done {
            p.partial_count = count;
            p.done = true;
        }
    }
}

/// Serialize a set of job checkpoints.
pub fn render(ckpts: &[Checkpoint]) -> String {
    let mut out = String::from(CHECKPOINT_HEADER);
    out.push('\n');
    for c in ckpts {
        for p in &c.partitions {
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                c.engine,
                c.level,
                c.x,
                p.id,
                p.partial_count,
                u8::from(p.done)
            ));
        }
    }
    out
}

/// Parse checkpoint text; any malformed line rejects the whole file.
pub fn parse(text: &str) -> Result<Vec<Checkpoint>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CHECKPOINT_HEADER => {}
        Some(h) => {
            return Err(CliError::Usage(format!(
                "checkpoint version mismatch: expected '{CHECKPOINT_HEADER}', found '{h}'"
            )))
        }
        None => return Err(CliError::Usage("checkpoint file is empty".into())),
    }
    let mut out: Vec<Checkpoint> = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || CliError::Usage(format!("malformed checkpoint line {}: '{line}'", k + 2));
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(bad());
        }
        let engine: Engine = f[0].parse().map_err(|_| bad())?;
        let level: u32 = f[1].parse().map_err(|_| bad())?;
        let x: u64 = f[2].parse().map_err(|_| bad())?;
        let id: usize = f[3].parse().map_err(|_| bad())?;
        let partial_count: u64 = f[4].parse().map_err(|_| bad())?;
        let done = match f[5] {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        let idx = match out.iter().position(|c| c.matches(engine, level, x)) {
            Some(i) => i,
            None => {
                out.push(Checkpoint { engine, level, x, partitions: Vec::new() });
                out.len() - 1
            }
        };
        let c = &mut out[idx];
        if id != c.partitions.len() {
            return Err(CliError::Usage(format!(
                "checkpoint line {}: partition ids must run 0, 1, 2, ... per job",
                k + 2
            )));
        }
        c.partitions.push(PartitionState { id, partial_count, done });
    }
    Ok(out)
}

pub fn save(ckpts: &[Checkpoint], path: &Path) -> Result<(), CliError> {
    // write then rename, so an interrupted save leaves the old file intact
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, render(ckpts)).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn load(path: &Path) -> Result<Vec<Checkpoint>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}

/// Save one checkpoint and read it back.
pub fn checkpoint_roundtrip(c: &Checkpoint, path: &Path) -> Result<Checkpoint, CliError> {
    save(std::slice::from_ref(c), path)?;
    let mut back = load(path)?;
    match back.len() {
        1 => Ok(back.remove(0)),
        0 if c.partitions.is_empty() => Ok(Checkpoint { partitions: Vec::new(), ..c.clone() }),
        n => Err(CliError::Usage(format!("expected one job in the checkpoint, found {n}"))),
    }
}

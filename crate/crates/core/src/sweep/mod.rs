//! Sweeps over all primes up to a bound, their on-disk form, and the
//! statistics computed from them.
//!
//! Primes in `[5, x]` are cut into blocks of [`BLOCK_PRIMES`] consecutive
//! primes. Workers take blocks from a shared counter; a single writer puts
//! finished blocks back in index order, so the output is independent of the
//! number of workers. With a checkpoint path every finished block is
//! appended to that file followed by `#done <index>`, and a later run
//! resumes after the last complete block.

mod csv;
pub mod stats;
mod summary;
mod threshold;

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

pub use self::csv::{format_csv, parse_csv, CSV_HEADER};
pub use summary::{summarize, Summary, DEFAULT_DENSITY_MAX, SQUARE_COUNT_BOUND};
pub use threshold::ThresholdFunction;

use crate::arith::primes_in;
use crate::curve::CurveQ;
use crate::endoring::{EndoRecord, Engine};
use crate::error::{Error, Result};

pub const BLOCK_PRIMES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub x: u64,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub override_cm: bool,
}

impl SweepConfig {
    pub fn new(x: u64) -> Self {
        SweepConfig { x, jobs: 1, checkpoint: None, override_cm: false }
    }
}

/// Primes whose record could not be pinned down, with their traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unresolved {
    pub p: u64,
    pub a: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    pub curve: String,
    pub x: u64,
    pub records: Vec<EndoRecord>,
    pub skipped: Vec<u64>,
    pub unresolved: Vec<Unresolved>,
}

impl SweepResult {
    pub fn unresolved_count(&self) -> usize {
        self.unresolved.len()
    }
}

/// One block's worth of output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Block {
    pub records: Vec<EndoRecord>,
    pub skipped: Vec<u64>,
    pub unresolved: Vec<Unresolved>,
}

fn compute_block(engine: &Engine, e: &CurveQ, primes: &[u64]) -> Result<Block> {
    let mut block = Block::default();
    for &p in primes {
        match engine.endo_data(e, p) {
            Ok(rec) => block.records.push(rec),
            Err(Error::BadReduction(_)) => block.skipped.push(p),
            Err(Error::Unresolved { p, a, .. }) => {
                log::warn!("{}: record at p={p} unresolved", e.label);
                block.unresolved.push(Unresolved { p, a });
            }
            Err(other) => return Err(other),
        }
    }
    Ok(block)
}

pub(crate) fn blocks_of(x: u64) -> Result<Vec<Vec<u64>>> {
    let primes = if x >= 5 { primes_in(5, x)? } else { Vec::new() };
    Ok(primes.chunks(BLOCK_PRIMES).map(|c| c.to_vec()).collect())
}

pub fn run_sweep(e: &CurveQ, cfg: &SweepConfig, engine: &Engine) -> Result<SweepResult> {
    if cfg.x < 5 {
        return Err(Error::OutOfRange(cfg.x));
    }
    if e.is_cm() && !cfg.override_cm {
        return Err(Error::CmRefused(e.label.clone()));
    }
    let blocks = blocks_of(cfg.x)?;
    let mut done: Vec<Block> = Vec::new();
    let mut sink = None;
    if let Some(path) = &cfg.checkpoint {
        let (prior, valid_len) = csv::load_checkpoint(path, &e.label, cfg.x)?;
        done = prior;
        if done.len() > blocks.len() {
            return Err(Error::CheckpointCorrupt(format!("{} blocks for {} expected", done.len(), blocks.len())));
        }
        let file = OpenOptions::new().create(true).write(true).truncate(false).open(path)?;
        file.set_len(valid_len)?;
        let mut file = OpenOptions::new().append(true).open(path)?;
        if valid_len == 0 {
            file.write_all(csv::preamble(&e.label, cfg.x).as_bytes())?;
        }
        if !done.is_empty() {
            log::info!("resuming {} after {} of {} blocks", e.label, done.len(), blocks.len());
        }
        sink = Some(file);
    }

    let start = done.len();
    let pending = &blocks[start..];
    let jobs = cfg.jobs.max(1).min(pending.len().max(1));
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<Block>)>();
    let mut failure = None;
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let (next, abort) = (&next, &abort);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= pending.len() {
                    break;
                }
                let out = compute_block(engine, e, &pending[i]);
                if tx.send((i, out)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut parked: BTreeMap<usize, Block> = BTreeMap::new();
        for (i, out) in rx {
            match out {
                Ok(block) => {
                    parked.insert(i, block);
                }
                Err(err) => {
                    abort.store(true, Ordering::Relaxed);
                    failure.get_or_insert(err);
                    continue;
                }
            }
            while let Some(block) = parked.remove(&(done.len() - start)) {
                if let Some(file) = sink.as_mut() {
                    let text = csv::format_block(&e.label, &block, done.len());
                    if let Err(err) = file.write_all(text.as_bytes()).and_then(|_| file.flush()) {
                        abort.store(true, Ordering::Relaxed);
                        failure.get_or_insert(err.into());
                    }
                }
                done.push(block);
                log::debug!("{}: block {} of {} done", e.label, done.len(), blocks.len());
            }
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }

    let mut result = SweepResult {
        curve: e.label.clone(),
        x: cfg.x,
        records: Vec::new(),
        skipped: Vec::new(),
        unresolved: Vec::new(),
    };
    for block in done {
        result.records.extend(block.records);
        result.skipped.extend(block.skipped);
        result.unresolved.extend(block.unresolved);
    }
    Ok(result)
}

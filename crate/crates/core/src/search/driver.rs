//! Chunked parallel execution with an append-only checkpoint file.
//!
//! Checkpoint layout, one JSON object per line:
//!
//! ```text
//! {"kind":"header","configHash":"<sha256 hex>","total":98}
//! {"kind":"chunk","start":0,"end":64,"reports":[...]}
//! ```

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectra::Scanner;

use super::report::CrossingReport;

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "DSPECTRA_WORKERS";

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// `None` uses [`WORKERS_ENV`] if set, else all cores.
    pub workers: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    pub chunk_size: u64,
    /// Stop after this many new chunks; used to exercise resumption.
    pub max_chunks: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            workers: None,
            checkpoint: None,
            chunk_size: 1024,
            max_chunks: None,
        }
    }
}

impl ScanOptions {
    pub fn resolved_workers(&self) -> Result<usize> {
        if let Some(w) = self.workers {
            return if w == 0 {
                Err(Error::InvalidConfig("workers must be >= 1".into()))
            } else {
                Ok(w)
            };
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(w) if w > 0 => Ok(w),
                _ => Err(Error::InvalidConfig(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
            },
            Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanOutcome {
    /// Sorted by class or tuple index.
    pub reports: Vec<CrossingReport>,
    pub units_done: u64,
    pub units_total: u64,
}

impl ScanOutcome {
    pub fn is_complete(&self) -> bool {
        self.units_done == self.units_total
    }

    pub fn max_violation(&self) -> Option<f64> {
        self.reports.iter().map(|r| r.max_violation).reduce(f64::max)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum Record {
    #[serde(rename_all = "camelCase")]
    Header { config_hash: String, total: u64 },
    Chunk {
        start: u64,
        end: u64,
        reports: Vec<CrossingReport>,
    },
}

pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

struct Checkpoint {
    path: PathBuf,
    file: File,
}

impl Checkpoint {
    /// Opens or creates the file and returns the completed prefix.
    fn open(path: &Path, hash: &str, total: u64) -> Result<(Self, u64, Vec<CrossingReport>)> {
        let corrupt = |reason: String| Error::CheckpointCorrupt {
            path: path.to_path_buf(),
            reason,
        };
        let mut done = 0;
        let mut reports = Vec::new();
        let mut valid = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
            let raw = std::fs::read(path)?;
            let ends_clean = raw.last().is_none_or(|&b| b == b'\n');
            for (i, line) in lines.iter().enumerate() {
                let is_tail = i + 1 == lines.len() && !ends_clean;
                let rec: Record = match serde_json::from_str(line) {
                    Ok(r) => r,
                    // A torn final write from an interrupted run.
                    Err(_) if is_tail && i > 0 => break,
                    Err(e) => return Err(corrupt(format!("line {}: {e}", i + 1))),
                };
                match (i, rec) {
                    (0, Record::Header { config_hash, total: t }) => {
                        if config_hash != hash || t != total {
                            return Err(Error::CheckpointMismatch {
                                path: path.to_path_buf(),
                                expected: hash.to_string(),
                                found: config_hash,
                            });
                        }
                    }
                    (0, _) => return Err(corrupt("missing header".into())),
                    (_, Record::Chunk { start, end, reports: r }) => {
                        if start != done || end < start || end > total {
                            return Err(corrupt(format!("chunk {start}..{end} does not follow {done}")));
                        }
                        done = end;
                        reports.extend(r);
                    }
                    (_, Record::Header { .. }) => return Err(corrupt("repeated header".into())),
                }
                valid.push(line.clone());
            }
            if valid.len() < lines.len() || !ends_clean {
                let mut text = valid.join("\n");
                if !text.is_empty() {
                    text.push('\n');
                }
                std::fs::write(path, text)?;
            }
        }
        let fresh = valid.is_empty();
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if fresh {
            let header = Record::Header {
                config_hash: hash.to_string(),
                total,
            };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
            file.flush()?;
        }
        Ok((
            Self {
                path: path.to_path_buf(),
                file,
            },
            done,
            reports,
        ))
    }

    fn append(&mut self, start: u64, end: u64, reports: &[CrossingReport]) -> Result<()> {
        let rec = Record::Chunk {
            start,
            end,
            reports: reports.to_vec(),
        };
        let mut line = serde_json::to_string(&rec)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        self.file.sync_data().map_err(|e| Error::CheckpointCorrupt {
            path: self.path.clone(),
            reason: e.to_string(),
        })
    }
}

/// Runs `unit(scanner, i)` for `i in 0..total` on a worker pool, chunk by
/// chunk, checkpointing after each chunk.
pub(crate) fn run_chunked<C, F>(total: u64, config: &C, opts: &ScanOptions, unit: F) -> Result<ScanOutcome>
where
    C: Serialize,
    F: Fn(&mut Scanner, u64) -> Result<Option<CrossingReport>> + Sync,
{
    if opts.chunk_size == 0 {
        return Err(Error::InvalidConfig("chunk size must be >= 1".into()));
    }
    let hash = config_hash(config)?;
    let (mut checkpoint, mut done, mut reports) = match &opts.checkpoint {
        Some(path) => {
            let (c, d, r) = Checkpoint::open(path, &hash, total)?;
            (Some(c), d, r)
        }
        None => (None, 0, Vec::new()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.resolved_workers()?)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut chunks = 0;
    while done < total {
        if opts.max_chunks.is_some_and(|m| chunks >= m) {
            break;
        }
        let end = (done + opts.chunk_size).min(total);
        let found: Vec<CrossingReport> = pool.install(|| {
            (done..end)
                .into_par_iter()
                .map_init(Scanner::new, |s, i| unit(s, i))
                .collect::<Result<Vec<_>>>()
                .map(|v| v.into_iter().flatten().collect())
        })?;
        if let Some(c) = checkpoint.as_mut() {
            c.append(done, end, &found)?;
        }
        reports.extend(found);
        done = end;
        chunks += 1;
    }
    reports.sort_by_key(|r| r.class_index);
    Ok(ScanOutcome {
        reports,
        units_done: done,
        units_total: total,
    })
}

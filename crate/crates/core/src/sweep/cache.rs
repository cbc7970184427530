use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::SweepRecord;
use crate::error::{Error, Result};

/// Default cache location for the command line.
pub const CACHE_ENV: &str = "WORMHOLE_CACHE";

/// First line of every cache file.
pub const CACHE_VERSION: &str = "wormhole-sweep-cache v1";

#[derive(Serialize, Deserialize)]
struct Block {
    lo: u64,
    hi: u64,
    sha256: String,
    records: Vec<SweepRecord>,
}

fn checksum(lo: u64, hi: u64, records: &[SweepRecord]) -> String {
    let body = serde_json::to_vec(records).expect("records serialize");
    let mut h = Sha256::new();
    h.update(lo.to_le_bytes());
    h.update(hi.to_le_bytes());
    h.update(&body);
    hex::encode(h.finalize())
}

/// Append-only file of census blocks keyed by their `Δ` range.
///
/// Lines that fail to parse or whose checksum does not match are dropped
/// on load, so the range is simply recomputed.
#[derive(Debug)]
pub struct SweepCache {
    path: PathBuf,
    blocks: BTreeMap<(u64, u64), Vec<SweepRecord>>,
    discarded: usize,
}

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

impl SweepCache {
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = SweepCache {
            path: path.to_path_buf(),
            blocks: BTreeMap::new(),
            discarded: 0,
        };
        if !path.exists() {
            cache.reset()?;
            return Ok(cache);
        }
        let file = File::open(path).map_err(|e| io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        match lines.next() {
            Some(Ok(h)) if h == CACHE_VERSION => {}
            _ => {
                cache.reset()?;
                return Ok(cache);
            }
        }
        for line in lines {
            let Ok(line) = line else {
                cache.discarded += 1;
                continue;
            };
            match serde_json::from_str::<Block>(&line) {
                Ok(b) if b.sha256 == checksum(b.lo, b.hi, &b.records) => {
                    cache.blocks.insert((b.lo, b.hi), b.records);
                }
                _ => cache.discarded += 1,
            }
        }
        Ok(cache)
    }

    fn reset(&mut self) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        }
        fs::write(&self.path, format!("{CACHE_VERSION}\n")).map_err(|e| io(&self.path, e))
    }

    pub fn get(&self, range: (u64, u64)) -> Option<&Vec<SweepRecord>> {
        self.blocks.get(&range)
    }

    pub fn ranges(&self) -> Vec<(u64, u64)> {
        self.blocks.keys().copied().collect()
    }

    /// Number of lines rejected while loading.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn append(&mut self, (lo, hi): (u64, u64), records: &[SweepRecord]) -> Result<()> {
        let block = Block {
            lo,
            hi,
            sha256: checksum(lo, hi, records),
            records: records.to_vec(),
        };
        let mut line = serde_json::to_string(&block).expect("block serializes");
        line.push('\n');
        let mut f = OpenOptions::new()
            .append(true)
            .open(&self.path)
            .map_err(|e| io(&self.path, e))?;
        f.write_all(line.as_bytes())
            .map_err(|e| io(&self.path, e))?;
        self.blocks.insert((lo, hi), records.to_vec());
        Ok(())
    }
}

//! Exhaustive wormhole census over `Δ`, named families and report output.

mod cache;
mod families;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pres::{detect_wormhole, pair_case, trace_invariant, ExtremalPRes, Wormhole};
use crate::wahl::Cqs;

pub use cache::{SweepCache, CACHE_ENV, CACHE_VERSION};
pub use families::{
    counterexample_family, delta2_family, exploratory_sweep, CounterexampleRecord, Delta2Record,
    ExploratoryRecord,
};

/// Width of the `Δ` blocks handed to workers and stored in the cache.
pub const BLOCK: u64 = 50;

/// One P-resolution as it appears in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PResSummary {
    /// Written order, i.e. already reversed.
    pub left: Option<Vec<u64>>,
    pub c: u64,
    pub right: Option<Vec<u64>>,
    pub m1: u64,
    pub a1: u64,
    pub m2: u64,
    pub a2: u64,
}

impl From<&ExtremalPRes> for PResSummary {
    fn from(p: &ExtremalPRes) -> Self {
        let side = |s: &crate::pres::Side| s.chain().map(|w| w.entries.entries().to_vec());
        PResSummary {
            left: side(&p.left),
            c: p.center,
            right: side(&p.right),
            m1: p.m1(),
            a1: p.a1(),
            m2: p.m2(),
            a2: p.a2(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub delta_sing: u64,
    pub omega: u64,
    pub omega_canonical: u64,
    pub delta_inv: u64,
    pub pres: [PResSummary; 2],
    pub d1: u64,
    pub d2: u64,
    pub types: [String; 2],
    pub case: String,
}

impl SweepRecord {
    pub fn from_wormhole(w: &Wormhole) -> Self {
        SweepRecord {
            delta_sing: w.singularity.delta,
            omega: w.singularity.omega,
            omega_canonical: w.singularity.canonical().omega,
            delta_inv: w.delta,
            pres: [(&w.pres1).into(), (&w.pres2).into()],
            d1: w.d1,
            d2: w.d2,
            types: [
                w.pres1.pres_type().to_string(),
                w.pres2.pres_type().to_string(),
            ],
            case: pair_case(&w.pres1, &w.pres2).to_string(),
        }
    }

    pub fn singularity(&self) -> Cqs {
        Cqs {
            delta: self.delta_sing,
            omega: self.omega,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub delta_max: u64,
    pub count: u64,
    pub histogram: BTreeMap<u64, u64>,
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    fn from_records(delta_max: u64, mut records: Vec<SweepRecord>) -> Self {
        records.sort_by_key(|r| (r.delta_sing, r.omega));
        let mut histogram = BTreeMap::new();
        for r in &records {
            *histogram.entry(r.delta_inv).or_insert(0) += 1;
        }
        SweepReport {
            delta_max,
            count: records.len() as u64,
            histogram,
            records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let dashed = |v: &Option<Vec<u64>>| match v {
            Some(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join("-"),
            None => String::new(),
        };
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["delta_sing", "omega", "omega_canonical", "delta_inv"];
        let pres_cols = ["left", "c", "right", "m1", "a1", "m2", "a2"];
        let names: Vec<String> = (1..=2)
            .flat_map(|i| pres_cols.iter().map(move |c| format!("pres{i}_{c}")))
            .collect();
        header.extend(names.iter().map(String::as_str));
        header.extend(["d1", "d2", "type1", "type2", "case"]);
        let io = |e: csv::Error| Error::Cache(e.to_string());
        w.write_record(&header).map_err(io)?;
        for r in &self.records {
            let mut row = vec![
                r.delta_sing.to_string(),
                r.omega.to_string(),
                r.omega_canonical.to_string(),
                r.delta_inv.to_string(),
            ];
            for p in &r.pres {
                row.extend([
                    dashed(&p.left),
                    p.c.to_string(),
                    dashed(&p.right),
                    p.m1.to_string(),
                    p.a1.to_string(),
                    p.m2.to_string(),
                    p.a2.to_string(),
                ]);
            }
            row.extend([
                r.d1.to_string(),
                r.d2.to_string(),
                r.types[0].clone(),
                r.types[1].clone(),
                r.case.clone(),
            ]);
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Cache(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
    pub cache: Option<PathBuf>,
}

/// Wormholes with `Δ` in `lo..=hi`, one record per orientation `(Δ, Ω)`.
///
/// Each isomorphism class is examined once through its canonical
/// representative; the reversed orientation is re-derived and checked
/// against it.
pub fn scan_block(lo: u64, hi: u64) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::new();
    for delta in lo.max(2)..=hi {
        for omega in 1..delta {
            if num_integer::gcd(delta, omega) != 1 {
                continue;
            }
            let s = Cqs { delta, omega };
            let inverse = s.omega_inverse();
            if omega > inverse {
                continue;
            }
            let Some(w) = detect_wormhole(&s)? else {
                continue;
            };
            validate(&w)?;
            out.push(SweepRecord::from_wormhole(&w));
            if inverse != omega {
                let r = s.reversed();
                let mirror = detect_wormhole(&r)?.ok_or_else(|| {
                    Error::TheoremViolation(format!("{s} is a wormhole but {r} is not"))
                })?;
                if mirror.delta != w.delta {
                    return Err(Error::TheoremViolation(format!(
                        "{s} and {r} have different delta"
                    )));
                }
                validate(&mirror)?;
                out.push(SweepRecord::from_wormhole(&mirror));
            }
        }
    }
    Ok(out)
}

fn validate(w: &Wormhole) -> Result<()> {
    trace_invariant(w)?;
    Ok(())
}

/// `[lo, hi]` blocks covering `2..=delta_max`, aligned to [`BLOCK`].
pub fn blocks(delta_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 1;
    while lo <= delta_max {
        let hi = (lo + BLOCK - 1).min(delta_max);
        out.push((lo, hi));
        lo += BLOCK;
    }
    out
}

type BlockRecords = ((u64, u64), Vec<SweepRecord>);

fn run_blocks(todo: &[(u64, u64)], jobs: usize) -> Result<Vec<BlockRecords>> {
    let work = || {
        todo.par_iter()
            .map(|&(lo, hi)| scan_block(lo, hi).map(|r| ((lo, hi), r)))
            .collect::<Result<Vec<_>>>()
    };
    if jobs == 1 {
        return todo
            .iter()
            .map(|&(lo, hi)| scan_block(lo, hi).map(|r| ((lo, hi), r)))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(work)
}

/// Every wormhole with `Δ <= delta_max`.
pub fn census(delta_max: u64) -> Result<SweepReport> {
    census_with(delta_max, &CensusOptions::default())
}

pub fn census_with(delta_max: u64, opts: &CensusOptions) -> Result<SweepReport> {
    if delta_max < 2 {
        return Err(Error::Precondition(format!("delta_max = {delta_max} < 2")));
    }
    let wanted = blocks(delta_max);
    let mut cache = match &opts.cache {
        Some(path) => Some(SweepCache::open(path)?),
        None => None,
    };
    let mut found = BTreeMap::new();
    if let Some(c) = &cache {
        for b in &wanted {
            if let Some(r) = c.get(*b) {
                found.insert(*b, r.clone());
            }
        }
    }
    let todo: Vec<_> = wanted
        .iter()
        .filter(|b| !found.contains_key(b))
        .copied()
        .collect();
    for (b, records) in run_blocks(&todo, opts.jobs)? {
        if let Some(c) = &mut cache {
            c.append(b, &records)?;
        }
        found.insert(b, records);
    }
    let records = found.into_values().flatten().collect();
    Ok(SweepReport::from_records(delta_max, records))
}

/// True when no wormhole with `Δ <= delta_max` has the given `δ`.
pub fn delta_absence(delta_target: u64, delta_max: u64) -> Result<bool> {
    delta_absence_with(delta_target, delta_max, &CensusOptions::default())
}

pub fn delta_absence_with(delta_target: u64, delta_max: u64, opts: &CensusOptions) -> Result<bool> {
    if delta_max < 2 {
        return Ok(true);
    }
    let report = census_with(delta_max, opts)?;
    Ok(!report.histogram.contains_key(&delta_target))
}

/// `(d_1, d_2, d_1 == d_2)`.
pub fn pi1_indices(record: &SweepRecord) -> (u64, u64, bool) {
    (record.d1, record.d2, record.d1 == record.d2)
}

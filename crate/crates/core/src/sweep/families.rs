use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cfrac::CFrac;
use crate::error::{Error, Result};
use crate::pres::{detect_wormhole, pair_case, PairCase, Wormhole};
use crate::wahl::{generate_wahl, Cqs};

fn twos(n: u64) -> String {
    vec!["2"; n as usize]
        .iter()
        .map(|s| format!("{s},"))
        .collect()
}

fn strings(w: &Wormhole) -> [String; 2] {
    [w.pres1.to_string(), w.pres2.to_string()]
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::TheoremViolation(what()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta2Record {
    pub k: u64,
    pub wormhole: Wormhole,
}

/// `Δ = 4k^2`, `Ω = (2k-1)^2`, with P-resolutions
/// `2-[2^{k-2},5,k]` and `[2^{k-1},k+3]-1-[2^{k-3},k+1]`.
pub fn delta2_family(k: u64) -> Result<Delta2Record> {
    if k < 3 {
        return Err(Error::Precondition(format!("k = {k} < 3")));
    }
    let s = Cqs::new(4 * k * k, (2 * k - 1) * (2 * k - 1))?;
    let w = detect_wormhole(&s)?
        .ok_or_else(|| Error::TheoremViolation(format!("{s} is not a wormhole")))?;
    require(w.delta == 2, || format!("{s} has delta {}", w.delta))?;
    let mut expected = [
        format!("2-[{}5,{k}]", twos(k - 2)),
        format!("[{}{}]-1-[{}{}]", twos(k - 1), k + 3, twos(k - 3), k + 1),
    ];
    let mut got = strings(&w);
    expected.sort();
    got.sort();
    require(got == expected, || {
        format!("{s}: found {got:?}, expected {expected:?}")
    })?;
    Ok(Delta2Record { k, wormhole: w })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub n: u64,
    pub chain: CFrac,
    pub wormhole: Wormhole,
}

/// The singularity `[n+2, 2^n, n+5, 2^n, n+2]` with the two P-resolutions
/// `[n+2, 2^n, n+5, 2^n]-(n+2)` and `(n+2)-[2^n, n+5, 2^n, n+2]`.
pub fn counterexample_family(n: u64) -> Result<CounterexampleRecord> {
    if n < 3 {
        return Err(Error::Precondition(format!("n = {n} < 3")));
    }
    let mut v = vec![n + 2];
    v.extend(std::iter::repeat_n(2, n as usize));
    v.push(n + 5);
    v.extend(std::iter::repeat_n(2, n as usize));
    v.push(n + 2);
    let chain = CFrac::new(v)?;
    let s = Cqs::from_value(&chain.evaluate().expect("entries >= 2"))?;
    let w = detect_wormhole(&s)?
        .ok_or_else(|| Error::TheoremViolation(format!("{chain} is not a wormhole")))?;
    let inner = format!("{}{},{}", twos(n), n + 5, twos(n).trim_end_matches(','));
    let mut expected = [
        format!("[{},{inner}]-{}", n + 2, n + 2),
        format!("{}-[{inner},{}]", n + 2, n + 2),
    ];
    let mut got = strings(&w);
    expected.sort();
    got.sort();
    require(got == expected, || {
        format!("{chain}: found {got:?}, expected {expected:?}")
    })?;
    require(pair_case(&w.pres1, &w.pres2) == PairCase::C, || {
        format!("{chain} is not a Wahl-m / m-Wahl pair")
    })?;
    Ok(CounterexampleRecord {
        n,
        chain,
        wormhole: w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploratoryRecord {
    pub singularity: Cqs,
    pub delta: u64,
    pub pres: [String; 2],
}

/// Wormholes reached from strings `Wahl-c-Wahl`, `Wahl-c` and `c-Wahl`
/// with `2 <= c <= c_max` and total length at most `max_len`.
///
/// Requiring `c >= 2` means the string is already the minimal resolution,
/// so no blow-up is involved. Results are keyed by canonical singularity.
pub fn exploratory_sweep(max_len: usize, c_max: u64) -> Result<Vec<ExploratoryRecord>> {
    let chains: Vec<Vec<u64>> = generate_wahl(max_len.saturating_sub(1))
        .into_iter()
        .map(|w| w.entries.into_entries())
        .collect();
    let mut sides: Vec<&[u64]> = vec![&[]];
    sides.extend(chains.iter().map(Vec::as_slice));

    let mut found = BTreeMap::new();
    for left in &sides {
        for right in &sides {
            if left.is_empty() && right.is_empty() || left.len() + right.len() + 1 > max_len {
                continue;
            }
            for c in 2..=c_max {
                let mut v = left.to_vec();
                v.push(c);
                v.extend_from_slice(right);
                let cf = CFrac::new(v)?;
                let value = cf.evaluate().expect("entries >= 2");
                let s = Cqs::from_value(&value)?.canonical();
                if found.contains_key(&s) {
                    continue;
                }
                if let Some(w) = detect_wormhole(&s)? {
                    found.insert(
                        s,
                        ExploratoryRecord {
                            singularity: s,
                            delta: w.delta,
                            pres: strings(&w),
                        },
                    );
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta2_small() {
        let r = delta2_family(3).unwrap();
        assert_eq!(r.wormhole.singularity, Cqs::new(36, 25).unwrap());
        assert_eq!(
            delta2_family(4).unwrap().wormhole.singularity,
            Cqs::new(64, 49).unwrap()
        );
        assert!(delta2_family(2).is_err());
    }

    #[test]
    fn counterexample_three() {
        let r = counterexample_family(3).unwrap();
        assert_eq!(r.chain.to_string(), "[5,2,2,2,8,2,2,2,5]");
        let mut got = strings(&r.wormhole);
        got.sort();
        assert_eq!(got, ["5-[2,2,2,8,2,2,2,5]", "[5,2,2,2,8,2,2,2]-5"]);
    }

    #[test]
    fn exploratory_small() {
        let r = exploratory_sweep(4, 4).unwrap();
        assert!(r
            .iter()
            .any(|x| x.singularity == Cqs::new(36, 13).unwrap() && x.delta == 2));
    }
}

//! Numerical data of mk1A and mk2A extremal neighbourhoods and the kind of
//! the K-negative contraction they define.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cfrac::{CFrac, Rational};
use crate::error::{Error, Result};
use crate::pres::{enumerate_pres, ExtremalPRes, PResType};
use crate::wahl::{discrepancies, is_wahl, Cqs, WahlChain};

/// A Wahl chain with one curve meeting the contracted curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mk1A {
    pub chain: WahlChain,
    /// 1-based.
    pub marked: usize,
}

impl Mk1A {
    pub fn new(chain: WahlChain, marked: usize) -> Result<Self> {
        if marked == 0 || marked > chain.len() {
            return Err(Error::IndexOutOfRange {
                index: marked,
                len: chain.len(),
            });
        }
        Ok(Mk1A { chain, marked })
    }
}

/// Two Wahl chains joined through the contracted curve:
/// `[f_{s_2}, ..., f_1] - C - [e_1, ..., e_{s_1}]` with `e = chain1`, `f = chain2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mk2A {
    pub chain1: WahlChain,
    pub chain2: WahlChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContractionKind {
    Divisorial {
        m: u64,
        a: u64,
    },
    Flip(Vec<ExtremalPRes>),
    /// The target is Wahl and also has extremal P-resolutions; choosing
    /// between the two needs information beyond the numerical data.
    Ambiguous {
        m: u64,
        a: u64,
        candidates: Vec<ExtremalPRes>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionOutcome {
    pub target: Cqs,
    pub delta: u64,
    pub k_dot_c: Rational,
    pub c_sq: Rational,
    pub kind: ContractionKind,
}

fn target_of(entries: &[u64]) -> Result<Cqs> {
    let cf = CFrac::from_slice(entries)?;
    if cf.evaluate().is_none() {
        return Err(Error::Undefined(entries.to_vec()));
    }
    let conv = cf.convergents();
    let (p, q) = conv.last();
    let delta = p
        .to_u64()
        .filter(|&d| d >= 2)
        .ok_or_else(|| Error::Precondition(format!("{cf} has numerator {p}, not a singularity")))?;
    let omega = q.mod_floor(&BigInt::from(delta)).to_u64().unwrap_or(0);
    Cqs::new(delta, omega)
}

fn frac(n: i128, d: i128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn classify(target: &Cqs) -> Result<ContractionKind> {
    let wahl = is_wahl(&target.chain());
    let candidates = enumerate_pres(target)?;
    match (wahl, candidates.is_empty()) {
        (None, false) => Ok(ContractionKind::Flip(candidates)),
        (Some((m, a)), true) => Ok(ContractionKind::Divisorial { m, a }),
        (Some((m, a)), false) => Ok(ContractionKind::Ambiguous { m, a, candidates }),
        (None, true) => Err(Error::Precondition(format!(
            "{target} is neither Wahl nor has an extremal P-resolution"
        ))),
    }
}

pub fn mk1a_data(n: &Mk1A) -> Result<ContractionOutcome> {
    let w = &n.chain;
    let i = n.marked - 1;
    let mut entries = w.entries.entries().to_vec();
    entries[i] -= 1;
    let target = target_of(&entries)?;
    let delta = w.deltas[i];
    let m = w.m as i128;
    let k_dot_c = frac(-(delta as i128), m);

    // A (-1)-curve through the marked curve: K.C = -1 - k_i.
    let k = discrepancies(&w.entries)?;
    if k_dot_c != -(Rational::one() + &k.0[i]) {
        return Err(Error::TheoremViolation(format!(
            "K.C = {k_dot_c} disagrees with the discrepancy {} of {} at {}",
            k.0[i], w.entries, n.marked
        )));
    }
    Ok(ContractionOutcome {
        target,
        delta,
        k_dot_c,
        c_sq: frac(-(target.delta as i128), m * m),
        kind: classify(&target)?,
    })
}

/// `δ = m_2 a_1 - m_1 (m_2 - a_2)`, with `a_2` read along `chain2`.
pub fn mk2a_delta(n: &Mk2A) -> i128 {
    let (m1, a1) = (n.chain1.m as i128, n.chain1.a as i128);
    let (m2, a2) = (n.chain2.m as i128, n.chain2.a as i128);
    m2 * a1 - m1 * (m2 - a2)
}

pub fn mk2a_data(n: &Mk2A) -> Result<ContractionOutcome> {
    let delta = mk2a_delta(n);
    if delta <= 0 {
        return Err(Error::Precondition(format!(
            "{} and {} give delta = {delta}; not K-negative",
            n.chain1, n.chain2
        )));
    }
    let mut entries: Vec<u64> = n.chain2.entries.entries().iter().rev().copied().collect();
    entries.push(1);
    entries.extend_from_slice(n.chain1.entries.entries());
    let cf = CFrac::new(entries)?;
    if !cf.is_admissible() {
        return Err(Error::NotAdmissible(cf.into_entries()));
    }
    let target = target_of(cf.entries())?;
    let mm = n.chain1.m as i128 * n.chain2.m as i128;
    Ok(ContractionOutcome {
        target,
        delta: delta as u64,
        k_dot_c: frac(-delta, mm),
        c_sq: frac(-(target.delta as i128), mm * mm),
        kind: classify(&target)?,
    })
}

/// The chosen candidate of a flipping (or ambiguous) outcome.
pub fn flip_replacement(outcome: &ContractionOutcome, choice: usize) -> Result<ExtremalPRes> {
    let candidates = match &outcome.kind {
        ContractionKind::Flip(c) | ContractionKind::Ambiguous { candidates: c, .. } => c,
        ContractionKind::Divisorial { .. } => {
            return Err(Error::Precondition(format!(
                "contraction onto {} is divisorial",
                outcome.target
            )))
        }
    };
    let p = candidates.get(choice).ok_or(Error::IndexOutOfRange {
        index: choice,
        len: candidates.len(),
    })?;
    let chain = outcome.target.chain();
    if chain.sum() == 3 * chain.len() as u64
        && p.singular_count() >= 1
        && !matches!(p.pres_type(), PResType::MinusOne | PResType::MinusTwo)
    {
        return Err(Error::TheoremViolation(format!(
            "flip of {} by {p} is neither Type(-1) nor Type(-2)",
            outcome.target
        )));
    }
    Ok(p.clone())
}

/// `K · Γ = -1 - Σ k_j` for a `(-1)`-curve `Γ` meeting curves with
/// discrepancies `k_j` (with multiplicity).
pub fn k_dot_minus_one_curve(met: &[Rational]) -> Rational {
    -met.iter().fold(Rational::one(), |acc, k| acc + k)
}

//! Extremal P-resolutions, wormhole singularities and the sequence
//! combinatorics around them.
//!
//! Extremal P-resolutions of `1/Δ(1,Ω)` correspond to pairs `α < β` such
//! that decrementing entries `α` and `β` of the dual chain `[c_1, ..., c_s]`
//! gives a zero continued fraction. The left piece `[c_1, ..., c_{α-1}]`
//! evaluates to `m_2/a_2`, the reversed right piece `[c_s, ..., c_{β+1}]` to
//! `m_1/a_1` and the middle `[c_{α+1}, ..., c_{β-1}]` to `δ/ε`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::{CFrac, Convergents, Mat2, Rational};
use crate::error::{Error, Result};
use crate::wahl::{wahl_chain, Cqs, WahlChain};

/// One end of an extremal P-resolution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Nonsingular point; `m = a = 1`.
    Smooth,
    /// A Wahl singularity, stored in the order it is written.
    Singular(WahlChain),
}

impl Side {
    pub fn chain(&self) -> Option<&WahlChain> {
        match self {
            Side::Smooth => None,
            Side::Singular(w) => Some(w),
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Side::Singular(_))
    }

    pub fn m(&self) -> u64 {
        self.chain().map_or(1, |w| w.m)
    }

    fn written(&self) -> &[u64] {
        self.chain().map_or(&[], |w| w.entries.entries())
    }
}

/// `[f_{s_2}, ..., f_1] - c - [e_1, ..., e_{r_1}]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtremalPRes {
    /// Left singularity as written, i.e. the reversal of `m_2^2/(m_2 a_2 - 1)`.
    pub left: Side,
    pub center: u64,
    /// Right singularity as written, `m_1^2/(m_1 a_1 - 1)`.
    pub right: Side,
    pub delta: u64,
    /// `ε` in `δ/ε`; absent when the middle piece is empty.
    pub epsilon: Option<u64>,
    pub target: Cqs,
    /// The pair `(α, β)` on the dual chain, 1-based.
    pub pair: (usize, usize),
}

/// Definition of the two distinguished shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PResType {
    /// Two singularities around a `(-1)`-curve.
    MinusOne,
    /// One singularity next to a `(-2)`-curve.
    MinusTwo,
    Other {
        c: u64,
        l: u8,
    },
}

impl fmt::Display for PResType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PResType::MinusOne => f.write_str("Type(-1)"),
            PResType::MinusTwo => f.write_str("Type(-2)"),
            PResType::Other { c, l } => write!(f, "other({c},{l})"),
        }
    }
}

impl ExtremalPRes {
    pub fn m1(&self) -> u64 {
        self.right.m()
    }

    pub fn a1(&self) -> u64 {
        self.right.chain().map_or(1, |w| w.a)
    }

    pub fn m2(&self) -> u64 {
        self.left.m()
    }

    /// `a_2` read in the orientation `m_2/a_2 = [c_1, ..., c_{α-1}]`.
    pub fn a2(&self) -> u64 {
        self.left.chain().map_or(1, |w| w.reversed().a)
    }

    /// Number of singular points, `l`.
    pub fn singular_count(&self) -> u8 {
        self.left.is_singular() as u8 + self.right.is_singular() as u8
    }

    /// `[f_{s_2}, ..., f_1, c, e_1, ..., e_{r_1}]`.
    pub fn chain(&self) -> CFrac {
        let mut v = self.left.written().to_vec();
        v.push(self.center);
        v.extend_from_slice(self.right.written());
        CFrac::new(v).expect("center is positive")
    }

    /// `K · C^+ = δ / (m_1 m_2)`.
    pub fn k_dot_curve(&self) -> Rational {
        Rational::new(self.delta.into(), (self.m1() * self.m2()).into())
    }

    pub fn pres_type(&self) -> PResType {
        classify_type(self)
    }

    pub fn singular_indices(&self) -> Vec<u64> {
        [&self.left, &self.right]
            .into_iter()
            .filter_map(|s| s.chain().map(|w| w.m))
            .collect()
    }
}

impl fmt::Display for ExtremalPRes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = self.left.chain() {
            write!(f, "{}-", w.entries)?;
        }
        write!(f, "{}", self.center)?;
        if let Some(w) = self.right.chain() {
            write!(f, "-{}", w.entries)?;
        }
        Ok(())
    }
}

pub fn classify_type(p: &ExtremalPRes) -> PResType {
    match (p.singular_count(), p.center) {
        (2, 1) => PResType::MinusOne,
        (1, 2) => PResType::MinusTwo,
        (l, c) => PResType::Other { c, l },
    }
}

type M2 = [[i128; 2]; 2];

const ID: M2 = [[1, 0], [0, 1]];

fn ov() -> Error {
    Error::Overflow("screening dual-chain pairs")
}

fn mul(a: &M2, b: &M2) -> Result<M2> {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let x = a[i][0].checked_mul(b[0][j]).ok_or_else(ov)?;
            let y = a[i][1].checked_mul(b[1][j]).ok_or_else(ov)?;
            out[i][j] = x.checked_add(y).ok_or_else(ov)?;
        }
    }
    Ok(out)
}

fn ent(x: u64) -> M2 {
    [[x as i128, -1], [1, 0]]
}

/// Every 1-based pair `(α, β)` whose double decrement of `c` is a zero
/// continued fraction.
///
/// A zero continued fraction has vanishing last convergent numerator, so
/// pairs are screened on that numerator with machine integers and only the
/// survivors are checked exactly.
pub fn zero_pairs(c: &[u64]) -> Result<Vec<(usize, usize)>> {
    let s = c.len();
    if s < 2 {
        return Ok(Vec::new());
    }
    let mut prefix = Vec::with_capacity(s + 1);
    prefix.push(ID);
    for &x in c {
        let next = mul(prefix.last().unwrap(), &ent(x))?;
        prefix.push(next);
    }
    // first column of E(c_j) ... E(c_s), with the empty product at j = s
    let mut suffix = vec![(1i128, 0i128); s + 1];
    for j in (0..s).rev() {
        let (u, v) = suffix[j + 1];
        let top = (c[j] as i128)
            .checked_mul(u)
            .and_then(|x| x.checked_sub(v))
            .ok_or_else(ov)?;
        suffix[j] = (top, u);
    }

    let mut hits = Vec::new();
    for a in 0..s - 1 {
        let mut acc = mul(&prefix[a], &ent(c[a] - 1))?;
        for b in a + 1..s {
            let (u, v) = suffix[b + 1];
            let x = c[b] as i128 - 1;
            let lead = acc[0][0]
                .checked_mul(x)
                .and_then(|t| t.checked_add(acc[0][1]))
                .ok_or_else(ov)?;
            let p = lead
                .checked_mul(u)
                .and_then(|t| t.checked_sub(acc[0][0].checked_mul(v)?))
                .ok_or_else(ov)?;
            if p == 0 {
                let mut d = c.to_vec();
                d[a] -= 1;
                d[b] -= 1;
                if CFrac::new(d).is_ok_and(|d| d.is_zero_cf()) {
                    hits.push((a + 1, b + 1));
                }
            }
            acc = mul(&acc, &ent(c[b]))?;
        }
    }
    Ok(hits)
}

fn value_of(entries: &[u64]) -> Result<(u64, u64)> {
    if entries.is_empty() {
        return Ok((1, 1));
    }
    let conv = Convergents::of(entries);
    let (p, q) = conv.last();
    let p = p.to_u64().ok_or(Error::Overflow("reading a chain value"))?;
    let q = q.to_u64().ok_or(Error::Overflow("reading a chain value"))?;
    Ok((p, q))
}

fn side_from(m: u64, a: u64, empty: bool) -> Result<Side> {
    if empty {
        return Ok(Side::Smooth);
    }
    wahl_chain(m, a).map(Side::Singular).map_err(|e| {
        Error::TheoremViolation(format!("piece {m}/{a} of a dual chain is not Wahl: {e}"))
    })
}

/// The center `c` making `[left, c, right]` evaluate to `Δ/Ω`, if any.
///
/// The top-left entry of the matrix product is affine in `c`.
pub fn center_from_chains(left: &[u64], right: &[u64], target: &Cqs) -> Option<u64> {
    let top = |c: i64| {
        let m = Mat2::product(
            left.iter()
                .map(|&x| x as i64)
                .chain([c])
                .chain(right.iter().map(|&x| x as i64)),
        );
        (m.0[0][0].clone(), m.0[1][0].clone())
    };
    let (p0, _) = top(0);
    let (p1, _) = top(1);
    let slope = &p1 - &p0;
    if slope.is_zero() {
        return None;
    }
    let (c, rem) = (BigInt::from(target.delta) - &p0).div_rem(&slope);
    if !rem.is_zero() {
        return None;
    }
    let c = c.to_u64().filter(|&c| c >= 1)?;
    let (p, q) = top(c as i64);
    let omega = q.mod_floor(&BigInt::from(target.delta));
    (p == BigInt::from(target.delta) && omega == BigInt::from(target.omega)).then_some(c)
}

/// All extremal P-resolutions of `s`, ordered by number of singular points
/// and then by `α`.
pub fn enumerate_pres(s: &Cqs) -> Result<Vec<ExtremalPRes>> {
    let c = s.dual_chain();
    let c = c.entries();
    let b = s.chain();
    let threshold = b.sum() as i64 - 3 * b.len() as i64 + 3;

    let mut out = Vec::new();
    for (alpha, beta) in zero_pairs(c)? {
        let left_piece = &c[..alpha - 1];
        let mut right_piece = c[beta..].to_vec();
        right_piece.reverse();
        let middle = &c[alpha..beta - 1];

        let (m2, a2) = value_of(left_piece)?;
        let (m1, a1) = value_of(&right_piece)?;
        let (delta, epsilon) = if middle.is_empty() {
            (1, None)
        } else {
            let (d, e) = value_of(middle)?;
            (d, Some(e))
        };

        let left = match side_from(m2, a2, left_piece.is_empty())? {
            Side::Singular(w) => Side::Singular(w.reversed()),
            smooth => smooth,
        };
        let right = side_from(m1, a1, right_piece.is_empty())?;
        let l = left.is_singular() as i64 + right.is_singular() as i64;
        let center = threshold - l;
        if center < 1 {
            return Err(Error::TheoremViolation(format!(
                "center {center} for pair ({alpha}, {beta}) of {s}"
            )));
        }
        let p = ExtremalPRes {
            left,
            center: center as u64,
            right,
            delta,
            epsilon,
            target: *s,
            pair: (alpha, beta),
        };
        verify_pres(&p)?;
        out.push(p);
    }
    out.sort_by_key(|p| (p.singular_count(), p.pair));
    Ok(out)
}

/// Re-checks the chain value, the center and the `δ` formula.
pub fn verify_pres(p: &ExtremalPRes) -> Result<()> {
    let fail = |what: &str| {
        Err(Error::TheoremViolation(format!(
            "{what} fails for {p} over {}",
            p.target
        )))
    };
    let value = p.chain().evaluate();
    if value.and_then(|v| Cqs::from_value(&v).ok()) != Some(p.target) {
        return fail("chain value");
    }
    if center_from_chains(p.left.written(), p.right.written(), &p.target) != Some(p.center) {
        return fail("center formula");
    }
    let (m1, a1, m2, a2) = (
        p.m1() as i128,
        p.a1() as i128,
        p.m2() as i128,
        p.a2() as i128,
    );
    let delta = p.center as i128 * m1 * m2 - m1 * a2 - m2 * a1;
    if delta <= 0 || delta != p.delta as i128 {
        return fail("delta = c m1 m2 - m1 a2 - m2 a1 > 0");
    }
    Ok(())
}

/// A cyclic quotient singularity with two extremal P-resolutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wormhole {
    pub singularity: Cqs,
    pub pres1: ExtremalPRes,
    pub pres2: ExtremalPRes,
    pub delta: u64,
    pub d1: u64,
    pub d2: u64,
}

fn gcd_index(p: &ExtremalPRes) -> u64 {
    p.singular_indices()
        .into_iter()
        .fold(0, num_integer::gcd)
        .max(1)
}

pub fn detect_wormhole(s: &Cqs) -> Result<Option<Wormhole>> {
    let mut all = enumerate_pres(s)?;
    match all.len() {
        0 | 1 => Ok(None),
        2 => {
            let pres2 = all.pop().unwrap();
            let pres1 = all.pop().unwrap();
            if pres1.delta != pres2.delta {
                return Err(Error::TheoremViolation(format!(
                    "{s}: P-resolutions {pres1} and {pres2} have delta {} and {}",
                    pres1.delta, pres2.delta
                )));
            }
            Ok(Some(Wormhole {
                singularity: *s,
                delta: pres1.delta,
                d1: gcd_index(&pres1),
                d2: gcd_index(&pres2),
                pres1,
                pres2,
            }))
        }
        n => Err(Error::TheoremViolation(format!(
            "{s} has {n} extremal P-resolutions"
        ))),
    }
}

/// A chain with every pair `(α, β)` whose double decrement is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WwSequence {
    pub entries: CFrac,
    pub pairs: Vec<(usize, usize)>,
    pub a0: i64,
}

pub fn ww_pairs(entries: &CFrac) -> Result<WwSequence> {
    entries.require_reduced()?;
    let pairs = zero_pairs(entries.entries())?;
    if pairs.len() > 2 {
        return Err(Error::TheoremViolation(format!(
            "{entries} has {} zero pairs",
            pairs.len()
        )));
    }
    Ok(WwSequence {
        a0: 3 * entries.len() as i64 - 1 - entries.sum() as i64,
        entries: entries.clone(),
        pairs,
    })
}

/// `1 0^{a_0 - 2} 1 0^{a_1 - 2} ... 1 0^{a_r - 2}`, read cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndicatorSequence {
    pub bits: Vec<u8>,
}

impl IndicatorSequence {
    /// Recovers `(a_0, a_1, ..., a_r)`.
    pub fn decode(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for &b in &self.bits {
            if b == 1 {
                out.push(2);
            } else if let Some(last) = out.last_mut() {
                *last += 1;
            }
        }
        out
    }

    /// `f_j = (e_j + e_{j+n/2}) / 2` for even length `n`.
    pub fn folded(&self) -> Option<Vec<Rational>> {
        let n = self.bits.len();
        if n % 2 == 1 {
            return None;
        }
        let h = n / 2;
        Some(
            (0..h)
                .map(|j| Rational::new((self.bits[j] + self.bits[j + h]).into(), 2.into()))
                .collect(),
        )
    }
}

pub fn indicator_sequence(a0: u64, entries: &CFrac) -> Result<IndicatorSequence> {
    if a0 < 2 {
        return Err(Error::EntryBelowTwo {
            index: 0,
            value: a0,
        });
    }
    entries.require_reduced()?;
    let mut bits = Vec::new();
    for &a in std::iter::once(&a0).chain(entries.entries()) {
        bits.push(1);
        bits.extend(std::iter::repeat_n(0, (a - 2) as usize));
    }
    Ok(IndicatorSequence { bits })
}

/// Outcome of the cyclic trace check on a wormhole.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    /// `(a_0, c_1, ..., c_s)` as read from the dual chain.
    pub cyclic: Vec<i64>,
    /// The sequence after removing every 1 cyclically.
    pub reduced: Vec<i64>,
    pub trace: BigInt,
}

/// Removes an entry 1 from a cyclic sequence, decrementing both neighbours;
/// the cyclic trace is unchanged.
fn remove_cyclic_ones(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 3 {
        let Some(i) = v.iter().position(|&x| x == 1) else {
            break;
        };
        let n = v.len();
        v[(i + n - 1) % n] -= 1;
        v[(i + 1) % n] -= 1;
        v.remove(i);
    }
    v
}

fn cyclic_trace(v: &[i64]) -> BigInt {
    Mat2::product(v.iter().copied()).trace()
}

/// Asserts `tr((a_0 -1; 1 0)(c_1 -1; 1 0) ... (c_s -1; 1 0)) = δ^2 - 2`, both on
/// the raw cyclic sequence and after removing 1s when `a_0 = 1`.
pub fn trace_invariant(w: &Wormhole) -> Result<TraceReport> {
    let c = w.singularity.dual_chain();
    let a0 = 3 * c.len() as i64 - 1 - c.sum() as i64;
    if a0 < 1 {
        return Err(Error::Precondition(format!(
            "{} has a_0 = {a0}",
            w.singularity
        )));
    }
    let cyclic: Vec<i64> = std::iter::once(a0)
        .chain(c.entries().iter().map(|&x| x as i64))
        .collect();
    let reduced = remove_cyclic_ones(cyclic.clone());
    let expected = BigInt::from(w.delta) * BigInt::from(w.delta) - 2;
    let trace = cyclic_trace(&cyclic);
    if trace != expected || cyclic_trace(&reduced) != expected {
        return Err(Error::TheoremViolation(format!(
            "{}: cyclic trace {trace} differs from delta^2 - 2 = {expected}",
            w.singularity
        )));
    }
    Ok(TraceReport {
        cyclic,
        reduced,
        trace,
    })
}

/// The pair cases left open by the known theorems, by shape of the two
/// P-resolutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairCase {
    /// Wahl-m-Wahl twice.
    A,
    /// m-Wahl (or Wahl-m) against Wahl-(m-1)-Wahl.
    B,
    /// Wahl-m against m-Wahl.
    C,
    /// At least one side is Type(-1) or Type(-2), or no listed shape.
    Covered,
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCase::A => "(a)",
            PairCase::B => "(b)",
            PairCase::C => "(c)",
            PairCase::Covered => "covered",
        })
    }
}

pub fn pair_case(p: &ExtremalPRes, q: &ExtremalPRes) -> PairCase {
    use PResType::{MinusOne, MinusTwo};
    if matches!(p.pres_type(), MinusOne | MinusTwo) || matches!(q.pres_type(), MinusOne | MinusTwo)
    {
        return PairCase::Covered;
    }
    let (lp, lq) = (p.singular_count(), q.singular_count());
    match (lp, lq) {
        (2, 2) if p.center == q.center && p.center >= 2 => PairCase::A,
        (1, 2) if q.center + 1 == p.center && p.center >= 3 => PairCase::B,
        (2, 1) if p.center + 1 == q.center && q.center >= 3 => PairCase::B,
        (1, 1)
            if p.center == q.center
                && p.center >= 3
                && p.left.is_singular() != q.left.is_singular() =>
        {
            PairCase::C
        }
        _ => PairCase::Covered,
    }
}

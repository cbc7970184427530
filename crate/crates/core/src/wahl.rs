//! Cyclic quotient singularities, Wahl chains and discrepancies.
//!
//! Every Wahl chain `m^2/(ma-1)` is reached from `[4]` by the two rewrites
//!
//! ```text
//! [a_1, ..., a_r]  ->  [2, a_1, ..., a_r + 1]      (prepend)
//! [a_1, ..., a_r]  ->  [a_1 + 1, ..., a_r, 2]      (append)
//! ```
//!
//! and the weights `delta_i` carried along those rewrites give the
//! discrepancies `-1 + delta_i / m` with `m = delta_1 + delta_r`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::{self, CFrac, Rational};
use crate::error::{Error, Result};

/// The cyclic quotient singularity `1/Δ (1, Ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cqs {
    pub delta: u64,
    pub omega: u64,
}

impl Cqs {
    pub fn new(delta: u64, omega: u64) -> Result<Self> {
        if omega == 0 || omega >= delta || num_integer::gcd(delta, omega) != 1 {
            return Err(Error::InvalidPair { n: delta, q: omega });
        }
        Ok(Cqs { delta, omega })
    }

    /// Reads `Δ/Ω` off the value of an arbitrary chain; `Ω` is reduced mod `Δ`.
    pub fn from_value(value: &Rational) -> Result<Self> {
        let n = value
            .numer()
            .to_u64()
            .ok_or_else(|| Error::Precondition(format!("{value} is not a value n/q with n > 1")))?;
        let d = value.denom();
        let q = d.mod_floor(&BigInt::from(n)).to_u64().unwrap_or(0);
        if n < 2 {
            return Err(Error::Precondition(format!(
                "{value} is not a value n/q with n > 1"
            )));
        }
        Cqs::new(n, q)
    }

    /// `Ω^{-1} mod Δ`, the same singularity with the chain reversed.
    pub fn omega_inverse(&self) -> u64 {
        mod_inverse(self.omega, self.delta)
    }

    pub fn reversed(&self) -> Cqs {
        Cqs {
            delta: self.delta,
            omega: self.omega_inverse(),
        }
    }

    /// Representative `(Δ, min(Ω, Ω^{-1}))` of the isomorphism class.
    pub fn canonical(&self) -> Cqs {
        Cqs {
            delta: self.delta,
            omega: self.omega.min(self.omega_inverse()),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.omega <= self.omega_inverse()
    }

    pub fn chain(&self) -> CFrac {
        cfrac::expand(self.delta, self.omega).expect("validated pair")
    }

    pub fn dual_chain(&self) -> CFrac {
        cfrac::dual(self.delta, self.omega).expect("validated pair")
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.delta.into(), self.omega.into())
    }
}

impl fmt::Display for Cqs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.delta, self.omega)
    }
}

pub(crate) fn mod_inverse(x: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let g = (x as i128).extended_gcd(&(n as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(n as i128) as u64
}

/// A certified Wahl chain `m^2/(ma-1) = [e_1, ..., e_r]` with its weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WahlChain {
    pub entries: CFrac,
    pub m: u64,
    pub a: u64,
    pub deltas: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rewrite {
    Prepend,
    Append,
}

fn apply(entries: &mut Vec<u64>, deltas: &mut Vec<u64>, step: Rewrite) {
    let outer = deltas[0] + deltas[deltas.len() - 1];
    match step {
        Rewrite::Prepend => {
            *entries.last_mut().unwrap() += 1;
            entries.insert(0, 2);
            deltas.insert(0, outer);
        }
        Rewrite::Append => {
            entries[0] += 1;
            entries.push(2);
            deltas.push(outer);
        }
    }
}

/// Undoes rewrites back to `[4]`; the returned steps are in forward order.
fn rewrite_path(entries: &[u64]) -> Option<Vec<Rewrite>> {
    let mut v = entries.to_vec();
    let mut steps = Vec::new();
    while v.len() > 1 {
        let last = v.len() - 1;
        if v[0] == 2 && v[last] >= 3 {
            v.remove(0);
            *v.last_mut().unwrap() -= 1;
            steps.push(Rewrite::Prepend);
        } else if v[last] == 2 && v[0] >= 3 {
            v.pop();
            v[0] -= 1;
            steps.push(Rewrite::Append);
        } else {
            return None;
        }
    }
    if v != [4] {
        return None;
    }
    steps.reverse();
    Some(steps)
}

impl WahlChain {
    fn certify(entries: Vec<u64>, deltas: Vec<u64>) -> Result<Self> {
        let m = deltas[0] + deltas[deltas.len() - 1];
        let conv = cfrac::Convergents::of(&entries);
        let (p, q) = conv.last();
        let m_sq = BigInt::from(m) * BigInt::from(m);
        let a_times_m = q + BigInt::one();
        if *p != m_sq || !a_times_m.is_multiple_of(&BigInt::from(m)) {
            return Err(Error::TheoremViolation(format!(
                "{entries:?} with weights {deltas:?} does not evaluate to m^2/(ma-1) for m = {m}"
            )));
        }
        let a = (a_times_m / BigInt::from(m)).to_u64().unwrap();
        Ok(WahlChain {
            entries: CFrac::new(entries)?,
            m,
            a,
            deltas,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The same singularity read from the other end (`a -> m - a`).
    pub fn reversed(&self) -> WahlChain {
        WahlChain {
            entries: self.entries.reversed(),
            m: self.m,
            a: if self.m == 2 { 1 } else { self.m - self.a },
            deltas: self.deltas.iter().rev().copied().collect(),
        }
    }

    pub fn cqs(&self) -> Cqs {
        Cqs {
            delta: self.m * self.m,
            omega: self.m * self.a - 1,
        }
    }

    /// Discrepancies `-1 + delta_i / m` read off the weights.
    pub fn weight_discrepancies(&self) -> Vec<Rational> {
        let m = BigInt::from(self.m);
        self.deltas
            .iter()
            .map(|&d| Rational::new(BigInt::from(d), m.clone()) - Rational::one())
            .collect()
    }
}

impl fmt::Display for WahlChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.fmt(f)
    }
}

/// The Wahl chain of `1/m^2 (1, ma-1)`.
pub fn wahl_chain(m: u64, a: u64) -> Result<WahlChain> {
    if a == 0 || a >= m || num_integer::gcd(m, a) != 1 {
        return Err(Error::InvalidPair { n: m, q: a });
    }
    let n = m.checked_mul(m).ok_or(Error::Overflow("squaring m"))?;
    let entries = cfrac::expand(n, m * a - 1)?;
    let w = recognize(&entries)?.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "expansion {entries} of m={m}, a={a} is not reachable from [4]"
        ))
    })?;
    if (w.m, w.a) != (m, a) {
        return Err(Error::TheoremViolation(format!(
            "{entries} recognized as ({}, {}) instead of ({m}, {a})",
            w.m, w.a
        )));
    }
    Ok(w)
}

fn recognize(cf: &CFrac) -> Result<Option<WahlChain>> {
    let Some(steps) = rewrite_path(cf.entries()) else {
        return Ok(None);
    };
    let mut entries = vec![4];
    let mut deltas = vec![1];
    for step in steps {
        apply(&mut entries, &mut deltas, step);
    }
    debug_assert_eq!(entries, cf.entries());
    WahlChain::certify(entries, deltas).map(Some)
}

/// `(m, a)` when `cf` is a Wahl chain.
pub fn is_wahl(cf: &CFrac) -> Option<(u64, u64)> {
    as_wahl_chain(cf).map(|w| (w.m, w.a))
}

/// Certifies `cf` as a Wahl chain, computing its weights.
pub fn as_wahl_chain(cf: &CFrac) -> Option<WahlChain> {
    recognize(cf).ok().flatten()
}

/// Every Wahl chain of length at most `max_len`.
pub fn generate_wahl(max_len: usize) -> BTreeSet<WahlChain> {
    let mut out = BTreeSet::new();
    if max_len == 0 {
        return out;
    }
    let mut level = vec![(vec![4u64], vec![1u64])];
    for len in 1..=max_len {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (e, d) in level {
            if len < max_len {
                for step in [Rewrite::Prepend, Rewrite::Append] {
                    let (mut e2, mut d2) = (e.clone(), d.clone());
                    apply(&mut e2, &mut d2, step);
                    next.push((e2, d2));
                }
            }
            out.insert(WahlChain::certify(e, d).expect("rewrites preserve the Wahl form"));
        }
        level = next;
    }
    out
}

/// Discrepancies `k_i` of the minimal resolution chain `cf`, solving
/// `sum_j k_j (E_j . E_i) = e_i - 2` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancies(pub Vec<Rational>);

impl Discrepancies {
    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// `-1 < k_i <= 0` for every entry.
    pub fn in_range(&self) -> bool {
        let minus_one = -Rational::one();
        self.0.iter().all(|k| *k > minus_one && !k.is_positive())
    }
}

pub fn discrepancies(cf: &CFrac) -> Result<Discrepancies> {
    cf.require_reduced()?;
    let e: Vec<Rational> = cf
        .entries()
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect();
    let r = e.len();
    let two = Rational::from_integer(2.into());
    // Thomas algorithm on diag -e_i, off-diagonals 1.
    let mut diag: Vec<Rational> = e.iter().map(|x| -x).collect();
    let mut rhs: Vec<Rational> = e.iter().map(|x| x - &two).collect();
    for i in 1..r {
        if diag[i - 1].is_zero() {
            return Err(Error::TheoremViolation(format!(
                "singular intersection matrix for {cf}"
            )));
        }
        let w = Rational::one() / &diag[i - 1];
        diag[i] = &diag[i] - &w;
        rhs[i] = &rhs[i] - &w * &rhs[i - 1];
    }
    if diag[r - 1].is_zero() {
        return Err(Error::TheoremViolation(format!(
            "singular intersection matrix for {cf}"
        )));
    }
    let mut k = vec![Rational::zero(); r];
    k[r - 1] = &rhs[r - 1] / &diag[r - 1];
    for i in (0..r - 1).rev() {
        k[i] = (&rhs[i] - &k[i + 1]) / &diag[i];
    }
    Ok(Discrepancies(k))
}

/// Shape of a Wahl chain `[b_1, ..., b_t]` with `t >= 2` and `b_t = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainShape {
    /// `b_2 = ... = b_t = 2`.
    M,
    /// Anything else; `1/b_1 < mu < 1/(b_1 - 1)`.
    B { mu: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndDiscrepancies {
    pub shape: ChainShape,
    pub first: Rational,
    pub last: Rational,
}

/// Type M/B classification with the end discrepancies, each bound
/// re-checked against the exact linear solve.
pub fn classify_mb(w: &WahlChain) -> Result<EndDiscrepancies> {
    let b = w.entries.entries();
    let t = b.len();
    if t < 2 || b[t - 1] != 2 {
        return Err(Error::Precondition(format!(
            "{} needs length >= 2 and last entry 2",
            w.entries
        )));
    }
    let k = discrepancies(&w.entries)?;
    let first = k.0[0].clone();
    let last = k.0[t - 1].clone();
    let b1 = BigInt::from(b[0]);
    let violation = |what: &str| {
        Err(Error::TheoremViolation(format!(
            "{what} fails for {}",
            w.entries
        )))
    };

    if b[1..].iter().all(|&x| x == 2) {
        let inv = Rational::new(BigInt::one(), &b1 - 2);
        if first != &inv - Rational::one() || last != -inv {
            return violation("type M end discrepancies");
        }
        return Ok(EndDiscrepancies {
            shape: ChainShape::M,
            first,
            last,
        });
    }
    let mu = &first + Rational::one();
    let lower = Rational::new(BigInt::one(), b1.clone());
    let upper = Rational::new(BigInt::one(), &b1 - 1);
    if last != -mu.clone() || mu <= lower || mu >= upper {
        return violation("type B bound 1/b_1 < mu < 1/(b_1 - 1)");
    }
    Ok(EndDiscrepancies {
        shape: ChainShape::B { mu },
        first,
        last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(v: &[u64]) -> CFrac {
        CFrac::from_slice(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn wahl_chain_examples() {
        let w = wahl_chain(2, 1).unwrap();
        assert_eq!(w.entries, cf(&[4]));
        assert_eq!(w.deltas, vec![1]);
        let w = wahl_chain(3, 1).unwrap();
        assert_eq!(w.entries, cf(&[5, 2]));
        assert_eq!(w.deltas, vec![1, 2]);
        let w = wahl_chain(5, 3).unwrap();
        assert_eq!(w.entries, cf(&[2, 5, 3]));
        assert_eq!(w.entries.sum(), 10);
        assert!(wahl_chain(4, 2).is_err());
        assert!(wahl_chain(3, 3).is_err());
    }

    #[test]
    fn is_wahl_examples() {
        assert_eq!(is_wahl(&cf(&[2, 5, 3])), Some((5, 3)));
        assert_eq!(is_wahl(&cf(&[2, 3, 4, 3, 3])), None);
        assert_eq!(is_wahl(&cf(&[4])), Some((2, 1)));
        assert_eq!(is_wahl(&cf(&[3, 5, 2])), Some((5, 2)));
        assert_eq!(is_wahl(&cf(&[5, 2, 2])), None);
        assert_eq!(is_wahl(&cf(&[2, 2])), None);
        assert_eq!(is_wahl(&cf(&[1, 4])), None);
    }

    #[test]
    fn generate_small() {
        let one: Vec<CFrac> = generate_wahl(1).into_iter().map(|w| w.entries).collect();
        assert_eq!(one, vec![cf(&[4])]);
        let two: BTreeSet<CFrac> = generate_wahl(2).into_iter().map(|w| w.entries).collect();
        assert_eq!(two, BTreeSet::from([cf(&[4]), cf(&[5, 2]), cf(&[2, 5])]));
        assert!(generate_wahl(0).is_empty());
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancies(&cf(&[4])).unwrap().0, vec![rat(-1, 2)]);
        assert_eq!(
            discrepancies(&cf(&[2, 5])).unwrap().0,
            vec![rat(-1, 3), rat(-2, 3)]
        );
        assert!(discrepancies(&cf(&[2, 2, 3])).unwrap().in_range());
        assert!(discrepancies(&cf(&[2, 1])).is_err());
    }

    #[test]
    fn classify_mb_examples() {
        let m = classify_mb(&wahl_chain(3, 1).unwrap()).unwrap();
        assert_eq!(m.shape, ChainShape::M);
        assert_eq!((m.first, m.last), (rat(-2, 3), rat(-1, 3)));

        let b = classify_mb(&as_wahl_chain(&cf(&[3, 5, 2])).unwrap()).unwrap();
        let ChainShape::B { mu } = b.shape else {
            panic!("expected type B")
        };
        assert_eq!(mu, rat(2, 5));
        assert!(mu > rat(1, 3) && mu < rat(1, 2));

        assert!(matches!(
            classify_mb(&wahl_chain(2, 1).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cqs_canonical() {
        let s = Cqs::new(36, 25).unwrap();
        assert_eq!(s.omega_inverse(), 13);
        assert_eq!(s.canonical(), Cqs::new(36, 13).unwrap());
        assert!(Cqs::new(36, 12).is_err());
        assert_eq!(
            Cqs::from_value(&rat(129, 79)).unwrap(),
            Cqs::new(129, 79).unwrap()
        );
        assert_eq!(
            Cqs::from_value(&rat(3, 1)).unwrap(),
            Cqs::new(3, 1).unwrap()
        );
    }
}

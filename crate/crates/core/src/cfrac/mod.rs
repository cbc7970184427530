//! Hirzebruch–Jung continued fractions `[a_1, ..., a_r] = a_1 - 1/(a_2 - 1/(...))`.
//!
//! Values are exact. The matrix product of `(a_i -1; 1 0)` is the primary
//! evaluation route; the recursive definition is only consulted to decide
//! when a fraction is undefined.

mod matrix;
mod triangulation;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrix::Mat2;
pub use triangulation::Triangulation;

/// Exact arbitrary-precision fraction, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// A nonempty sequence of positive integers read as a Hirzebruch–Jung
/// continued fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CFrac(Vec<u64>);

impl CFrac {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = entries.iter().position(|&a| a == 0) {
            return Err(Error::NonPositiveEntry { index, value: 0 });
        }
        Ok(CFrac(entries))
    }

    pub fn from_slice(entries: &[u64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> CFrac {
        CFrac(self.0.iter().rev().copied().collect())
    }

    /// True when every entry is at least 2 (a minimal resolution chain).
    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|&a| a >= 2)
    }

    pub fn require_reduced(&self) -> Result<()> {
        match self.0.iter().position(|&a| a < 2) {
            Some(index) => Err(Error::EntryBelowTwo {
                index,
                value: self.0[index],
            }),
            None => Ok(()),
        }
    }

    pub fn convergents(&self) -> Convergents {
        Convergents::of(&self.0)
    }

    /// Exact value, or `None` when the recursive definition divides by zero.
    pub fn evaluate(&self) -> Option<Rational> {
        if !suffixes_nonzero(&self.0) {
            return None;
        }
        let conv = self.convergents();
        let (p, q) = conv.last();
        // det = 1 forces q != 0 once no proper suffix vanishes
        debug_assert!(!q.is_zero());
        Some(Rational::new(p.clone(), q.clone()))
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.0)
    }

    pub fn is_zero_cf(&self) -> bool {
        is_admissible(&self.0) && self.evaluate().is_some_and(|v| v.is_zero())
    }
}

impl TryFrom<Vec<u64>> for CFrac {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        CFrac::new(v)
    }
}

impl From<CFrac> for Vec<u64> {
    fn from(c: CFrac) -> Self {
        c.0
    }
}

impl fmt::Display for CFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

pub(crate) fn write_bracketed(f: &mut fmt::Formatter<'_>, entries: &[u64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in entries.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str("]")
}

/// Parses `a1,a2,...`, optionally wrapped in brackets. Whitespace is not
/// accepted.
impl FromStr for CFrac {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(s);
        if inner.is_empty() {
            return Err(Error::Empty);
        }
        let mut entries = Vec::new();
        for (index, tok) in inner.split(',').enumerate() {
            let value: i64 = tok
                .parse()
                .map_err(|_| Error::Precondition(format!("malformed integer {tok:?} in {s:?}")))?;
            if value <= 0 {
                return Err(Error::NonPositiveEntry { index, value });
            }
            entries.push(value as u64);
        }
        CFrac::new(entries)
    }
}

/// Convergent numerators and denominators: `p_0 = 1, p_1 = a_1, q_0 = 0,
/// q_1 = 1` and `x_i = a_i x_{i-1} - x_{i-2}` for both sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    pub p: Vec<BigInt>,
    pub q: Vec<BigInt>,
}

impl Convergents {
    pub fn of(entries: &[u64]) -> Self {
        let mut p = Vec::with_capacity(entries.len() + 1);
        let mut q = Vec::with_capacity(entries.len() + 1);
        p.push(BigInt::one());
        q.push(BigInt::zero());
        for (i, &a) in entries.iter().enumerate() {
            let a = BigInt::from(a);
            if i == 0 {
                p.push(a);
                q.push(BigInt::one());
            } else {
                let np = &a * &p[i] - &p[i - 1];
                let nq = &a * &q[i] - &q[i - 1];
                p.push(np);
                q.push(nq);
            }
        }
        Convergents { p, q }
    }

    pub fn len(&self) -> usize {
        self.p.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> (&BigInt, &BigInt) {
        let r = self.len();
        (&self.p[r], &self.q[r])
    }

    /// `(p_i -p_{i-1}; q_i -q_{i-1})`, which equals the ordered product of
    /// the first `i` entry matrices.
    pub fn matrix(&self, i: usize) -> Mat2 {
        assert!(
            i >= 1 && i <= self.len(),
            "convergent index {i} out of range"
        );
        Mat2::new(
            self.p[i].clone(),
            -self.p[i - 1].clone(),
            self.q[i].clone(),
            -self.q[i - 1].clone(),
        )
    }
}

fn is_admissible(entries: &[u64]) -> bool {
    let conv = Convergents::of(entries);
    let r = entries.len();
    (1..r).all(|i| conv.p[i].is_positive())
}

/// Numerators of every proper suffix `[a_k, ..., a_r]`, `k >= 2`, are nonzero.
fn suffixes_nonzero(entries: &[u64]) -> bool {
    let mut next = BigInt::one(); // N_{k+1}
    let mut after = BigInt::zero(); // N_{k+2}
    for (k, &a) in entries.iter().enumerate().rev() {
        let cur = BigInt::from(a) * &next - &after;
        if k >= 1 && cur.is_zero() {
            return false;
        }
        after = std::mem::replace(&mut next, cur);
    }
    true
}

/// Value of a continued fraction; errors on empty input, `Ok(None)` when undefined.
pub fn evaluate(entries: &[u64]) -> Result<Option<Rational>> {
    Ok(CFrac::from_slice(entries)?.evaluate())
}

fn check_pair(n: u64, q: u64) -> Result<()> {
    if q == 0 || q >= n || num_integer::gcd(n, q) != 1 {
        return Err(Error::InvalidPair { n, q });
    }
    Ok(())
}

/// The unique expansion `n/q = [a_1, ..., a_r]` with every `a_i >= 2`.
pub fn expand(n: u64, q: u64) -> Result<CFrac> {
    check_pair(n, q)?;
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q != 0 {
        let c = n.div_ceil(q);
        out.push(c);
        (n, q) = (q, c * q - n);
    }
    Ok(CFrac(out))
}

/// Expansion of the dual fraction `n/(n-q)`.
pub fn dual(n: u64, q: u64) -> Result<CFrac> {
    check_pair(n, q)?;
    expand(n, n - q)
}

/// Riemenschneider's point diagram: row `i` holds `a_i - 1` dots, each row
/// starting under the last dot of the previous one; column `j` then holds
/// `b_j - 1` dots of the dual expansion.
pub fn dual_by_dots(cf: &CFrac) -> Result<CFrac> {
    cf.require_reduced()?;
    let width: u64 = cf.0.iter().map(|a| a - 1).sum::<u64>() - (cf.len() as u64 - 1);
    let mut columns = vec![0u64; width as usize];
    let mut start = 0usize;
    for &a in &cf.0 {
        let dots = (a - 1) as usize;
        for c in &mut columns[start..start + dots] {
            *c += 1;
        }
        start += dots - 1;
    }
    Ok(CFrac(columns.into_iter().map(|c| c + 1).collect()))
}

/// Removes the entry equal to 1 at 1-based `position`, decrementing its
/// surviving neighbour(s).
pub fn blow_down(cf: &CFrac, position: usize) -> Result<CFrac> {
    let r = cf.len();
    let err = |reason| Error::BlowDown {
        entries: cf.0.clone(),
        index: position,
        reason,
    };
    if position == 0 || position > r {
        return Err(Error::IndexOutOfRange {
            index: position,
            len: r,
        });
    }
    if r < 2 {
        return Err(err("a single entry cannot be blown down"));
    }
    if cf.0[position - 1] != 1 {
        return Err(err("entry is not 1"));
    }
    if !cf.is_admissible() {
        return Err(Error::NotAdmissible(cf.0.clone()));
    }
    let i = position - 1;
    let mut out = cf.0.clone();
    for j in [i.wrapping_sub(1), i + 1] {
        if j < r {
            if out[j] <= 1 {
                return Err(err("a neighbour would drop below 1"));
            }
            out[j] -= 1;
        }
    }
    out.remove(i);
    Ok(CFrac(out))
}

/// Inserts a 1 after the first `position` entries (0 = front, r = back)
/// and increments the adjacent entries.
pub fn blow_up(cf: &CFrac, position: usize) -> Result<CFrac> {
    let r = cf.len();
    if position > r {
        return Err(Error::IndexOutOfRange {
            index: position,
            len: r,
        });
    }
    if !cf.is_admissible() {
        return Err(Error::NotAdmissible(cf.0.clone()));
    }
    let mut out = cf.0.clone();
    if position > 0 {
        out[position - 1] += 1;
    }
    if position < r {
        out[position] += 1;
    }
    out.insert(position, 1);
    Ok(CFrac(out))
}

/// Rank of the tridiagonal intersection matrix with `-a_i` on the diagonal
/// and 1 next to it, by exact Gaussian elimination.
pub fn intersection_matrix_rank(cf: &CFrac) -> usize {
    let r = cf.len();
    let mut m: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        Rational::from_integer(-BigInt::from(cf.0[i]))
                    } else if i.abs_diff(j) == 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..r {
        let Some(piv) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All zero continued fractions of length `r`, by closing `[1, 1]` under
/// the three blow-ups.
pub fn enumerate_zero_cfs(r: usize) -> Result<BTreeSet<CFrac>> {
    if r < 2 {
        return Err(Error::LengthTooSmall(r, 2));
    }
    let mut level: BTreeSet<CFrac> = BTreeSet::from([CFrac(vec![1, 1])]);
    for _ in 2..r {
        let mut next = BTreeSet::new();
        for cf in &level {
            for pos in 0..=cf.len() {
                next.insert(blow_up(cf, pos)?);
            }
        }
        level = next;
    }
    Ok(level)
}

/// `binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> u64 {
    let mut c = 1u64;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
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
    fn evaluate_examples() {
        assert_eq!(cf(&[2, 4, 3]).evaluate(), Some(rat(19, 11)));
        assert_eq!(cf(&[1, 1]).evaluate(), Some(rat(0, 1)));
        assert_eq!(cf(&[5, 1, 2, 1]).evaluate(), None);
        assert_eq!(evaluate(&[]), Err(Error::Empty));
    }

    #[test]
    fn inner_zero_suffix_is_undefined() {
        // [1,1] = 0 makes [2,1,1] divide by zero; the matrix route would
        // report -1/0 and [3,2,1,1] would even look finite.
        assert_eq!(cf(&[2, 1, 1]).evaluate(), None);
        assert_eq!(cf(&[3, 2, 1, 1]).evaluate(), None);
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand(19, 11).unwrap(), cf(&[2, 4, 3]));
        assert_eq!(expand(2, 1).unwrap(), cf(&[2]));
        assert_eq!(expand(36, 13).unwrap(), cf(&[3, 5, 2, 2]));
        assert!(expand(36, 12).is_err());
        assert!(expand(5, 5).is_err());
        assert!(expand(5, 0).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(19, 11).unwrap(), cf(&[3, 2, 3, 2]));
        assert_eq!(dual(2, 1).unwrap(), cf(&[2]));
        assert_eq!(dual(36, 13).unwrap(), cf(&[2, 3, 2, 2, 4]));
        assert_eq!(dual_by_dots(&cf(&[2, 4, 3])).unwrap(), cf(&[3, 2, 3, 2]));
        assert!(dual_by_dots(&cf(&[2, 1])).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(cf(&[2, 2, 2]).is_admissible());
        assert!(cf(&[1, 1]).is_admissible());
        assert!(cf(&[5, 1, 2, 1]).is_admissible());
        assert!(!cf(&[1, 1, 1]).is_admissible());
    }

    #[test]
    fn blow_down_examples() {
        let x = cf(&[2, 3, 5, 3, 1, 2, 5, 3]);
        let y = blow_down(&x, 5).unwrap();
        assert_eq!(y, cf(&[2, 3, 5, 2, 1, 5, 3]));
        let z = blow_down(&blow_down(&y, 5).unwrap(), 4).unwrap();
        assert_eq!(z, cf(&[2, 3, 4, 3, 3]));
        assert_eq!(z.evaluate(), Some(rat(129, 79)));

        assert_eq!(blow_down(&cf(&[1, 3, 2]), 1).unwrap(), cf(&[2, 2]));
        assert_eq!(blow_down(&cf(&[2, 2, 1]), 3).unwrap(), cf(&[2, 1]));
    }

    #[test]
    fn blow_down_errors() {
        assert!(matches!(
            blow_down(&cf(&[1, 1]), 1),
            Err(Error::BlowDown { .. })
        ));
        assert!(matches!(
            blow_down(&cf(&[2, 3]), 1),
            Err(Error::BlowDown { .. })
        ));
        assert!(matches!(
            blow_down(&cf(&[2, 3]), 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            blow_down(&cf(&[1, 1, 1]), 2),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn blow_up_examples() {
        assert_eq!(blow_up(&cf(&[1, 1]), 1).unwrap(), cf(&[2, 1, 2]));
        assert_eq!(blow_up(&cf(&[1, 1]), 0).unwrap(), cf(&[1, 2, 1]));
        let x = blow_up(&cf(&[2, 1, 2]), 0).unwrap();
        assert_eq!(x, cf(&[1, 3, 1, 2]));
        assert!(x.is_zero_cf());
        assert!(blow_up(&cf(&[1, 1]), 3).is_err());
    }

    #[test]
    fn zero_cf_examples() {
        assert!(cf(&[1, 1]).is_zero_cf());
        assert!(cf(&[2, 1, 2]).is_zero_cf());
        assert!(!cf(&[2, 2]).is_zero_cf());
        assert_eq!(intersection_matrix_rank(&cf(&[2, 1, 2])), 2);
        assert_eq!(intersection_matrix_rank(&cf(&[2, 2])), 2);
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(
            enumerate_zero_cfs(2)
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![cf(&[1, 1])]
        );
        assert_eq!(
            enumerate_zero_cfs(3)
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![cf(&[1, 2, 1]), cf(&[2, 1, 2])]
        );
        assert_eq!(enumerate_zero_cfs(5).unwrap().len(), 14);
        assert_eq!(enumerate_zero_cfs(1), Err(Error::LengthTooSmall(1, 2)));
    }

    #[test]
    fn parse_and_display() {
        let x: CFrac = "2,4,3".parse().unwrap();
        assert_eq!(x.to_string(), "[2,4,3]");
        assert_eq!("[2,4,3]".parse::<CFrac>().unwrap(), x);
        assert!("2, 4".parse::<CFrac>().is_err());
        assert!("2,0".parse::<CFrac>().is_err());
        assert!("".parse::<CFrac>().is_err());
        assert!("2,-1".parse::<CFrac>().is_err());
    }

    #[test]
    fn serde_rejects_zero_entry() {
        assert!(serde_json::from_str::<CFrac>("[2,0]").is_err());
        let x: CFrac = serde_json::from_str("[3,5,2]").unwrap();
        assert_eq!(serde_json::to_string(&x).unwrap(), "[3,5,2]");
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..8).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }
}

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// 2x2 integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[BigInt; 2]; 2]);

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())
    }

    /// `(a -1; 1 0)`
    pub fn entry(a: i64) -> Self {
        Self::new(a.into(), (-1).into(), BigInt::one(), BigInt::zero())
    }

    /// Ordered product of the entry matrices of `entries`.
    pub fn product<I: IntoIterator<Item = i64>>(entries: I) -> Self {
        entries
            .into_iter()
            .fold(Self::identity(), |acc, a| &acc * &Self::entry(a))
    }

    pub fn trace(&self) -> BigInt {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> BigInt {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_matrices_have_unit_determinant() {
        let m = Mat2::product([3, 5, 2, 2]);
        assert_eq!(m.det(), BigInt::one());
        // first column is (n, q) for n/q = [3,5,2,2] = 36/13
        assert_eq!(m.0[0][0], 36.into());
        assert_eq!(m.0[1][0], 13.into());
    }

    #[test]
    fn ones_blow_down_identity() {
        // (x -1;1 0)(1 -1;1 0)(y -1;1 0) = (x-1 -1;1 0)(y-1 -1;1 0)
        for x in 1..6 {
            for y in 1..6 {
                assert_eq!(
                    Mat2::product([x, 1, y]),
                    Mat2::product([x - 1, y - 1]),
                    "x={x} y={y}"
                );
            }
        }
    }
}

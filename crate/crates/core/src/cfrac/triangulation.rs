use std::collections::BTreeSet;

use super::{blow_down, CFrac};
use crate::error::{Error, Result};

/// Triangulation of a convex polygon `P_0 P_1 ... P_r`, stored as its set
/// of diagonals `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    n_vertices: usize,
    diagonals: BTreeSet<(usize, usize)>,
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

impl Triangulation {
    pub fn new<I>(n_vertices: usize, diagonals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let bad = |msg: String| Err(Error::InvalidTriangulation(msg));
        if n_vertices < 3 {
            return bad(format!("a polygon needs 3 vertices, got {n_vertices}"));
        }
        let mut set = BTreeSet::new();
        for (i, j) in diagonals {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            if j >= n_vertices {
                return bad(format!("vertex {j} out of range"));
            }
            if j - i < 2 || (i == 0 && j == n_vertices - 1) {
                return bad(format!("({i}, {j}) is a side, not a diagonal"));
            }
            if !set.insert((i, j)) {
                return bad(format!("duplicate diagonal ({i}, {j})"));
            }
        }
        for &x in &set {
            for &y in set.range(x..).skip(1) {
                if crosses(x, y) {
                    return bad(format!("diagonals {x:?} and {y:?} cross"));
                }
            }
        }
        if set.len() != n_vertices - 3 {
            return bad(format!(
                "{} diagonals do not triangulate a {n_vertices}-gon",
                set.len()
            ));
        }
        Ok(Triangulation {
            n_vertices,
            diagonals: set,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn diagonals(&self) -> &BTreeSet<(usize, usize)> {
        &self.diagonals
    }

    /// `v_i`, the number of triangles with `P_i` as a vertex, for `i = 0..=r`.
    pub fn vertex_counts(&self) -> Vec<u64> {
        let mut v = vec![1u64; self.n_vertices];
        for &(i, j) in &self.diagonals {
            v[i] += 1;
            v[j] += 1;
        }
        v
    }

    /// `(v_1, ..., v_r)`; `v_0` is dropped.
    pub fn to_cf(&self) -> CFrac {
        let v = self.vertex_counts();
        CFrac::new(v[1..].to_vec()).expect("vertex counts are positive")
    }

    /// Inverse of [`Triangulation::to_cf`] on zero continued fractions.
    pub fn from_zero_cf(cf: &CFrac) -> Result<Self> {
        if !cf.is_zero_cf() {
            return Err(Error::NotZero(cf.entries().to_vec()));
        }
        let diagonals = diagonals_of(cf)?;
        Triangulation::new(cf.len() + 1, diagonals)
    }

    /// Every triangulation of an `n_vertices`-gon.
    pub fn enumerate(n_vertices: usize) -> Vec<Triangulation> {
        assert!(n_vertices >= 3);
        sub_triangulations(0, n_vertices - 1)
            .into_iter()
            .map(|diagonals| Triangulation {
                n_vertices,
                diagonals,
            })
            .collect()
    }
}

/// Peels an ear `P_i` (entry 1), recurses, then restores the vertex and the
/// diagonal `P_{i-1} P_{i+1}` cutting the ear off.
fn diagonals_of(cf: &CFrac) -> Result<Vec<(usize, usize)>> {
    let r = cf.len();
    if r == 2 {
        return Ok(Vec::new());
    }
    let pos = cf
        .entries()
        .iter()
        .position(|&a| a == 1)
        .ok_or_else(|| Error::NotZero(cf.entries().to_vec()))?
        + 1;
    let smaller = blow_down(cf, pos)?;
    let shift = |v: usize| if v >= pos { v + 1 } else { v };
    let mut out: Vec<(usize, usize)> = diagonals_of(&smaller)?
        .into_iter()
        .map(|(a, b)| (shift(a), shift(b)))
        .collect();
    let next = if pos == r { 0 } else { pos + 1 };
    let (a, b) = (pos - 1, next);
    out.push((a.min(b), a.max(b)));
    Ok(out)
}

/// Triangulations of the sub-polygon `lo, lo+1, ..., hi` (base side `lo hi`).
fn sub_triangulations(lo: usize, hi: usize) -> Vec<BTreeSet<(usize, usize)>> {
    if hi - lo < 2 {
        return vec![BTreeSet::new()];
    }
    let mut out = Vec::new();
    for apex in lo + 1..hi {
        let left = sub_triangulations(lo, apex);
        let right = sub_triangulations(apex, hi);
        for l in &left {
            for r in &right {
                let mut d: BTreeSet<_> = l.union(r).copied().collect();
                if apex - lo >= 2 {
                    d.insert((lo, apex));
                }
                if hi - apex >= 2 {
                    d.insert((apex, hi));
                }
                out.push(d);
            }
        }
    }
    out
}

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratmat::{rank, RatMatrix, Rational};

use super::{check_vertices, VERTEX_CAP};

/// Induced edge masks of every vertex subset, for fast sums of 0/±1 edge
/// vectors given as `(plus, minus)` bitmasks.
#[derive(Debug, Clone)]
pub struct RankIndex {
    n: usize,
    m: usize,
    induced: Vec<u128>,
}

impl RankIndex {
    pub fn new(g: &Graph) -> Result<Self> {
        check_vertices(g, VERTEX_CAP)?;
        if g.edge_count() > 128 {
            return Err(Error::CapExceeded { cap: "edges", limit: 128, requested: g.edge_count() });
        }
        let induced =
            (1..1u64 << g.vertex_count()).map(|u| g.induced_edges(u).fold(0u128, |acc, e| acc | 1 << e)).collect();
        Ok(RankIndex { n: g.vertex_count(), m: g.edge_count(), induced })
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Induced edges of the subset with bitmask `u`.
    pub fn induced(&self, u: u64) -> u128 {
        self.induced[u as usize - 1]
    }

    fn sum(&self, i: usize, plus: u128, minus: u128) -> i32 {
        (self.induced[i] & plus).count_ones() as i32 - (self.induced[i] & minus).count_ones() as i32
    }

    /// Bitmasks of the balanced subsets.
    pub fn balanced(&self, plus: u128, minus: u128) -> impl Iterator<Item = u64> + '_ {
        (0..self.induced.len()).filter(move |&i| self.sum(i, plus, minus) == 0).map(|i| i as u64 + 1)
    }

    /// Support edges lying in no balanced subset.
    pub fn unit_drop_edges(&self, plus: u128, minus: u128) -> u128 {
        let supp = plus | minus;
        let covered = self.balanced(plus, minus).fold(0u128, |acc, u| acc | (self.induced(u) & supp));
        supp & !covered
    }

    /// A subset imbalanced for `g` and balanced for `y`, when every subset balanced
    /// for `g` stays balanced for `y`.
    pub fn reduces(&self, y: (u128, u128), g: (u128, u128)) -> Option<u64> {
        let mut extra = None;
        for i in 0..self.induced.len() {
            let (sy, sg) = (self.sum(i, y.0, y.1), self.sum(i, g.0, g.1));
            if sg == 0 && sy != 0 {
                return None;
            }
            if sg != 0 && sy == 0 && extra.is_none() {
                extra = Some(i as u64 + 1);
            }
        }
        extra
    }

    /// Circuit test for a nonzero 0/±1 vector: the balanced rows restricted to
    /// the support must have rank `|supp| - 1`.
    pub fn is_circuit(&self, plus: u128, minus: u128) -> bool {
        let supp = plus | minus;
        assert!(supp != 0 && plus & minus == 0, "nonzero vector with disjoint sign masks");
        let mut rows: Vec<u128> =
            self.balanced(plus, minus).map(|u| self.induced(u) & supp).filter(|&r| r != 0).collect();
        rows.sort_unstable();
        rows.dedup();
        let cols: Vec<usize> = (0..128).filter(|&e| supp >> e & 1 == 1).collect();
        rank_01(&rows, &cols) + 1 == cols.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

/// Rank over the rationals of 0/1 rows restricted to `cols`.
fn rank_01(rows: &[u128], cols: &[usize]) -> usize {
    if cols.len() > 24 {
        let m = RatMatrix::from_rows(
            cols.len(),
            rows.iter()
                .map(|r| {
                    cols.iter().map(|&c| if r >> c & 1 == 1 { Rational::one() } else { Rational::zero() }).collect()
                })
                .collect(),
        );
        return rank(&m);
    }
    // fraction-free elimination; minors of a 0/1 matrix with <= 24 columns fit in i128
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| cols.iter().map(|&c| (r >> c & 1) as i128).collect()).collect();
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols.len() {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..cols.len() {
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Dense rational vector.
pub type RatVector = Vec<Rational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("zero vector")]
pub struct ZeroVector;

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<RatVector>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        RatMatrix { rows: n, cols, data }
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn push_row(&mut self, row: &[Rational]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// New matrix made of the selected rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        RatMatrix { rows: idx.len(), cols: self.cols, data }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        self.row_iter().map(|r| dot(r, v)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = m.get(r, j) * &inv;
                    m.set(r, j, v);
                }
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for r in self.row_iter() {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    let mut work: Vec<RatVector> = m.row_iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..work.len()).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(rank, p);
        let piv = work[rank][c].clone();
        for i in rank + 1..work.len() {
            if work[i][c].is_zero() {
                continue;
            }
            let f = &work[i][c] / &piv;
            for j in c..m.cols() {
                if work[rank][j].is_zero() {
                    continue;
                }
                let v = &work[i][j] - &(&f * &work[rank][j]);
                work[i][j] = v;
            }
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    rank
}

/// Basis of the right null space `{v : M v = 0}`; one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![None; m.cols()];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let mut basis = Vec::new();
    for f in 0..m.cols() {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols()];
        v[f] = Rational::one();
        for (i, &c) in pivots.iter().enumerate() {
            let e = r.get(i, f);
            if !e.is_zero() {
                v[c] = -e;
            }
        }
        basis.push(v);
    }
    basis
}

/// The unique solution of `M x = rhs`, or `None` when the system is
/// inconsistent or has a free variable.
pub fn solve_unique(m: &RatMatrix, rhs: &[Rational]) -> Option<RatVector> {
    assert_eq!(rhs.len(), m.rows(), "one right-hand side per row");
    let mut aug = RatMatrix::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols(), rhs[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.len() != m.cols() || pivots.last() == Some(&m.cols()) {
        return None;
    }
    Some((0..m.cols()).map(|i| r.get(i, m.cols()).clone()).collect())
}

/// Positive multiple of `v` with coprime integer entries.
pub fn normalize_coprime(v: &[Rational]) -> Result<RatVector, ZeroVector> {
    if v.iter().all(Rational::is_zero) {
        return Err(ZeroVector);
    }
    let mut lcm = BigInt::one();
    for x in v.iter().filter(|x| !x.is_zero()) {
        lcm = lcm.lcm(&x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Ok(ints.into_iter().map(|x| Rational::from_bigint(x / &g)).collect())
}

/// Flips `v` so that its first nonzero entry is positive.
pub fn canonical_sign(v: &[Rational]) -> RatVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v.to_vec(),
    }
}

/// Coprime integer form with first nonzero entry positive.
pub fn canonical_form(v: &[Rational]) -> Result<RatVector, ZeroVector> {
    Ok(canonical_sign(&normalize_coprime(v)?))
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

pub fn scale(v: &[Rational], s: &Rational) -> RatVector {
    v.iter().map(|x| x * s).collect()
}

/// `a + s·b`.
pub fn axpy(a: &[Rational], s: &Rational, b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| if y.is_zero() { x.clone() } else { x + &(s * y) }).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn support(v: &[Rational]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// Rational vector from integers.
pub fn ivec(v: &[i64]) -> RatVector {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// Whether every entry is an integer and the entries are nonnegative-or-signed
/// coprime (gcd of absolute values equals 1).
pub fn is_coprime_integral(v: &[Rational]) -> bool {
    if !v.iter().all(Rational::is_integer) || is_zero_vector(v) {
        return false;
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(&x.numer());
    }
    g.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::q;

    #[test]
    fn equal_pair_sums_force_halves() {
        // b + c = a, b + d = a, c + d = a in (b, c, d) for a = 3
        let m = RatMatrix::from_i64_rows(3, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        let x = solve_unique(&m, &[q(3, 1), q(3, 1), q(3, 1)]).unwrap();
        assert_eq!(x, vec![q(3, 2), q(3, 2), q(3, 2)]);
        // with a as a variable the kernel is the line (a, b, c, d) = (2, 1, 1, 1)
        let h = RatMatrix::from_i64_rows(4, &[vec![-1, 1, 1, 0], vec![-1, 1, 0, 1], vec![-1, 0, 1, 1]]);
        assert_eq!(kernel_basis(&h).len(), 1);
        assert_eq!(normalize_coprime(&kernel_basis(&h)[0]).unwrap(), ivec(&[2, 1, 1, 1]));
    }

    #[test]
    fn solve_rejects_singular_and_inconsistent() {
        let m = RatMatrix::from_i64_rows(2, &[vec![1, 1], vec![2, 2]]);
        assert_eq!(solve_unique(&m, &[q(1, 1), q(2, 1)]), None);
        assert_eq!(solve_unique(&m, &[q(1, 1), q(3, 1)]), None);
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&RatMatrix::identity(2)), 2);
        assert_eq!(rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RatMatrix::from_i64_rows(2, &[vec![1, 1], vec![2, 2]])), 1);
    }

    #[test]
    fn kernel_small_cases() {
        let k = kernel_basis(&RatMatrix::from_i64_rows(2, &[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(canonical_form(&k[0]).unwrap(), ivec(&[1, -1]));
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
        let k = kernel_basis(&RatMatrix::from_i64_rows(3, &[vec![1, 1, 0], vec![0, 1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(canonical_form(&k[0]).unwrap(), ivec(&[1, -1, 1]));
    }

    #[test]
    fn kernel_of_empty_matrix_is_identity() {
        let k = kernel_basis(&RatMatrix::zeros(0, 3));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_coprime(&[q(1, 2), q(-1, 2), q(1, 4)]).unwrap(), ivec(&[2, -2, 1]));
        assert_eq!(normalize_coprime(&ivec(&[3, 6, 9])).unwrap(), ivec(&[1, 2, 3]));
        let v = normalize_coprime(&[q(0, 1), q(-5, 3)]).unwrap();
        assert_eq!(v, ivec(&[0, -1]));
        assert_eq!(canonical_sign(&v), ivec(&[0, 1]));
        assert_eq!(normalize_coprime(&ivec(&[0, 0])), Err(ZeroVector));
    }
}

use std::sync::Arc;

use num_traits::{One, Zero};

use super::polynomial::{Polynomial, Rational, Ring};
use crate::error::{Error, Result};

/// Matrices up to this size use cofactor expansion; larger ones use Bareiss elimination.
const COFACTOR_MAX: usize = 4;

/// Row-major matrix of polynomials over a single ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for p in row {
                entries.push(p.with_ring(ring)?);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Submatrix on the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `Q * self` for an integer matrix `Q` acting on the rows.
    pub fn left_mul_integer(&self, q: &[Vec<i64>]) -> Result<PolyMatrix> {
        if q.len() != self.rows || q.iter().any(|r| r.len() != self.rows) {
            return Err(Error::Shape(format!(
                "row transform must be {0}x{0}",
                self.rows
            )));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for qrow in q {
            for j in 0..self.cols {
                let mut acc = Polynomial::zero(&self.ring);
                for (l, &c) in qrow.iter().enumerate() {
                    if c != 0 {
                        acc = &acc + &self.get(l, j).scale(&Rational::from_integer(c.into()));
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows <= COFACTOR_MAX {
            Ok(self.cofactor_det())
        } else {
            self.bareiss_det()
        }
    }

    /// Laplace expansion along the first row. Always available; tests use it
    /// as an independent check on the Bareiss path.
    pub fn cofactor_det(&self) -> Polynomial {
        let idx: Vec<usize> = (0..self.rows).collect();
        self.cofactor_rec(&idx, &idx)
    }

    fn cofactor_rec(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        match rows.len() {
            0 => Polynomial::one(&self.ring),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => {
                let a = self.get(rows[0], cols[0]) * self.get(rows[1], cols[1]);
                let b = self.get(rows[0], cols[1]) * self.get(rows[1], cols[0]);
                &a - &b
            }
            _ => {
                let mut acc = Polynomial::zero(&self.ring);
                let sub_rows = &rows[1..];
                for (pos, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != pos)
                        .map(|(_, &j)| j)
                        .collect();
                    let term = entry * &self.cofactor_rec(sub_rows, &sub_cols);
                    acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Fraction-free elimination; every division is exact.
    pub fn bareiss_det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ring));
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = Polynomial::one(&self.ring);
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        negate = !negate;
                    }
                    None => return Ok(Polynomial::zero(&self.ring)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(a.get(k, k) * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                    a.entries[i * n + j] = num.exact_div(&prev)?;
                }
            }
            prev = a.get(k, k).clone();
        }
        let det = a.get(n - 1, n - 1).clone();
        Ok(if negate { -&det } else { det })
    }
}

/// Dense square matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        RationalMatrix {
            dim,
            data: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NonSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.data[j * self.dim + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self * v`
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `v^T * self`
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Rational, other: &RationalMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix sum");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact determinant by Gaussian elimination with nonzero pivoting.
    pub fn determinant(&self) -> Rational {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let factor = &a[i * n + k] / &pivot;
                for j in k..n {
                    let delta = &factor * &a[k * n + j];
                    a[i * n + j] -= delta;
                }
            }
        }
        det
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn pm(ring: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(s, ring).unwrap()).collect())
            .collect();
        PolyMatrix::from_rows(ring, rows).unwrap()
    }

    #[test]
    fn two_by_two_minor_of_example() {
        let r = Ring::new(["x", "y", "z"]).unwrap();
        let m = pm(&r, &[&["2*z+2", "y+2"], &["2*y+1", "2*y+1"]]);
        let expected = parse_poly("(2*y+1)*(2*z-y)", &r).unwrap();
        assert_eq!(m.determinant().unwrap(), expected);
        let single = pm(&r, &[&["y+2"]]);
        assert_eq!(single.determinant().unwrap(), parse_poly("y+2", &r).unwrap());
    }

    #[test]
    fn identity_and_non_square() {
        let r = Ring::new(["x"]).unwrap();
        let id = pm(&r, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        assert_eq!(id.determinant().unwrap(), Polynomial::one(&r));
        let rect = pm(&r, &[&["1", "x"]]);
        assert!(matches!(
            rect.determinant(),
            Err(Error::NonSquare { rows: 1, cols: 2 })
        ));
    }

    #[test]
    fn bareiss_agrees_with_cofactor_on_symbolic_5x5() {
        let r = Ring::new(["x", "y"]).unwrap();
        let m = pm(
            &r,
            &[
                &["x", "1", "y", "0", "2"],
                &["0", "x+y", "1", "x", "0"],
                &["0", "0", "y^2", "1", "x"],
                &["1", "y", "0", "x*y", "3"],
                &["y", "0", "1", "0", "x-1"],
            ],
        );
        assert_eq!(m.bareiss_det().unwrap(), m.cofactor_det());
        // zero leading pivot exercises the row swap
        let s = pm(
            &r,
            &[
                &["0", "1", "x", "0", "0"],
                &["1", "0", "0", "y", "0"],
                &["0", "x", "1", "0", "y"],
                &["y", "0", "0", "1", "x"],
                &["0", "0", "y", "x", "1"],
            ],
        );
        assert_eq!(s.bareiss_det().unwrap(), s.cofactor_det());
        assert_eq!(s.determinant().unwrap(), s.cofactor_det());
    }

    #[test]
    fn row_transform_and_selection() {
        let r = Ring::new(["x"]).unwrap();
        let m = pm(&r, &[&["x", "1"], &["2", "x"]]);
        let t = m.left_mul_integer(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(t.get(0, 0), &parse_poly("x+2", &r).unwrap());
        assert_eq!(t.determinant().unwrap(), m.determinant().unwrap());
        let s = m.select(&[1], &[0]);
        assert_eq!(s.get(0, 0), &parse_poly("2", &r).unwrap());
    }

    #[test]
    fn rational_matrix_basics() {
        let a = RationalMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]]).unwrap();
        assert!(a.is_symmetric());
        assert_eq!(a.determinant(), q(5));
        assert_eq!(a.trace(), q(5));
        let id = RationalMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(a.mul_vec(&[q(1), q(0)]), vec![q(2), q(1)]);
        assert_eq!(a.vec_mul(&[q(0), q(1)]), vec![q(1), q(3)]);
        assert_eq!(RationalMatrix::zeros(0).determinant(), q(1));
        let sing = RationalMatrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(2)]]).unwrap();
        assert_eq!(sing.determinant(), q(0));
        let swap = RationalMatrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(swap.determinant(), q(-1));
    }
}

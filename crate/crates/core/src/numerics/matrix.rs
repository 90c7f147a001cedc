use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Ok(RationalMatrix {
                rows: 0,
                cols: 0,
                data: Vec::new(),
            });
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RationalMatrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// A·x for a column vector x.
    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
            })
            .collect())
    }

    /// yᵀ·A for a row vector y.
    pub fn vec_mul(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, vector has {}",
                self.rows,
                y.len()
            )));
        }
        Ok((0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| self.at(r, c) * &y[r])
                    .sum::<Rational>()
            })
            .collect())
    }

    /// Exact rank via fraction-free (Bareiss) Gaussian elimination on the
    /// denominator-cleared integer matrix.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Row scaling by a positive integer does not change rank.
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let lcm = self
                    .row(r)
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                self.row(r)
                    .iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect()
            })
            .collect();

        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division not exact");
                    m[r][c] = num / &prev;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.at(r, c).recip().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let factor = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j) - &(&factor * self.at(r, j));
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// A particular exact solution of A·x = b (free variables set to zero),
    /// or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, rhs has {}",
                self.rows,
                b.len()
            )));
        }
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = rhs.clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.at(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// A nonzero kernel vector, if one exists. Deterministic: the free
    /// variable with the smallest column index is set to one.
    pub fn nullspace_vector(&self) -> Option<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let mut v = vec![Rational::zero(); self.cols];
        v[free] = Rational::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -m.at(row, free).clone();
        }
        Some(v)
    }
}

/// Affine dimension of a point set: the rank of the matrix of differences
/// from the first point.
pub fn affine_dimension(points: &[Vec<Rational>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput(
            "affine_dimension needs at least one point",
        ));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch("points of unequal length".into()));
    }
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(RationalMatrix::from_rows(diffs)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    #[test]
    fn rank_identity() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(RationalMatrix::zeros(2, 4).rank(), 0);
    }

    #[test]
    fn rank_binary_rows() {
        // rows (0,0),(0,1),(1,0),(1,1) have rank 2 by hand elimination
        let m = RationalMatrix::from_rows(vec![
            vec![r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
            vec![r(1, 1), r(1, 1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_with_fractions() {
        let m = RationalMatrix::from_rows(vec![
            vec![r(1, 2), r(1, 3)],
            vec![r(3, 2), r(1, 1)],
            vec![r(1, 4), r(1, 6)],
        ])
        .unwrap();
        // row3 = row1/2, row2 = 3*row1
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn affine_dimension_cases() {
        assert_eq!(affine_dimension(&[vec![r(2, 1), r(3, 1)]]).unwrap(), 0);
        let collinear = vec![
            vec![r(0, 1), r(0, 1)],
            vec![r(1, 1), r(1, 1)],
            vec![r(2, 1), r(2, 1)],
        ];
        assert_eq!(affine_dimension(&collinear).unwrap(), 1);
        let square = vec![
            vec![r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
            vec![r(1, 1), r(1, 1)],
        ];
        assert_eq!(affine_dimension(&square).unwrap(), 2);
        assert!(affine_dimension(&[]).is_err());
    }

    #[test]
    fn solve_and_nullspace() {
        let m = RationalMatrix::from_rows(vec![
            vec![r(1, 1), r(1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(1, 1)],
        ])
        .unwrap();
        let x = m.solve(&[r(1, 1), r(1, 1)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![r(1, 1), r(1, 1)]);
        let v = m.nullspace_vector().unwrap();
        assert!(v.iter().any(|c| !c.is_zero()));
        assert!(m.mul_vec(&v).unwrap().iter().all(|c| c.is_zero()));

        let inconsistent =
            RationalMatrix::from_rows(vec![vec![r(1, 1), r(0, 1)], vec![r(1, 1), r(0, 1)]])
                .unwrap();
        assert!(inconsistent.solve(&[r(0, 1), r(1, 1)]).unwrap().is_none());
    }
}

//! Small dense matrices and LU with partial pivoting.
//!
//! Sizes here never exceed a few dozen, so a row-major `Vec` is all we need.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Clone + Zero> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }
}

impl<S: Clone> DenseMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.data.chunks(self.cols.max(1)).map(<[S]>::to_vec).collect()
    }

    pub fn map<U, F: FnMut(&S) -> U>(&self, f: F) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Deletes the first row and first column.
    pub fn drop_first(&self) -> DenseMatrix<S> {
        let data = (1..self.rows)
            .flat_map(|i| (1..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self[(i, j)].clone())
            .collect();
        DenseMatrix {
            rows: self.rows.saturating_sub(1),
            cols: self.cols.saturating_sub(1),
            data,
        }
    }
}

impl<S> DenseMatrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }
}

impl<S> Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for DenseMatrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> DenseMatrix<Complex<T>> {
    /// `self - shift * I`.
    pub fn shifted(&self, shift: Complex<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] -= shift;
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(x).fold(Complex::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex<T> {
        assert!(self.is_square());
        Lu::factor(self).det()
    }
}

/// In-place LU factorization `P A = L U`.
pub struct Lu<T> {
    n: usize,
    lu: Vec<Complex<T>>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &DenseMatrix<Complex<T>>) -> Self {
        assert!(a.is_square());
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| {
                    lu[r * n + col]
                        .norm()
                        .partial_cmp(&lu[s * n + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if pivot != col {
                for j in 0..n {
                    lu.swap(pivot * n + j, col * n + j);
                }
                perm.swap(pivot, col);
                swaps += 1;
            }
            let d = lu[col * n + col];
            if d.is_zero() {
                continue;
            }
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f.is_zero() {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu[col * n + j];
                    lu[r * n + j] -= f * u;
                }
            }
        }
        Lu { n, lu, perm, swaps }
    }

    pub fn det(&self) -> Complex<T> {
        let n = self.n;
        let d = (0..n).fold(Complex::new(T::one(), T::zero()), |acc, i| acc * self.lu[i * n + i]);
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Solves `A x = b`. Exactly singular pivots are replaced by a tiny value
    /// so inverse iteration at an exact eigenvalue still produces a direction.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        let tiny = T::epsilon() * T::epsilon();
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            let mut d = self.lu[i * n + i];
            if d.is_zero() {
                d = Complex::new(tiny, T::zero());
            }
            x[i] /= d;
        }
        x
    }
}

pub(crate) fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc.hypot(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn det_small() {
        let a = DenseMatrix::from_rows(vec![
            vec![C::new(0.0, 0.0), C::new(2.0, 0.0)],
            vec![C::new(2.0, 0.0), C::new(0.0, 0.0)],
        ]);
        assert!((a.det() - C::new(-4.0, 0.0)).norm() < 1e-15);
        let b = DenseMatrix::from_rows(vec![
            vec![C::new(2.0, 0.0), C::new(1.0, 1.0), C::new(0.0, 0.0)],
            vec![C::new(0.0, -1.0), C::new(3.0, 0.0), C::new(1.0, 0.0)],
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)],
        ]);
        // cofactor expansion along the first row
        let expect = C::new(2.0, 0.0) * (C::new(3.0, 0.0) - C::new(0.0, 0.0))
            - C::new(1.0, 1.0) * (C::new(0.0, -1.0) - C::new(1.0, 0.0));
        assert!((b.det() - expect).norm() < 1e-14);
    }

    #[test]
    fn solve_recovers_rhs() {
        let a = DenseMatrix::from_rows(vec![
            vec![C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 1.0)],
            vec![C::new(0.0, 0.0), C::new(1.0, -1.0), C::new(3.0, 0.0)],
            vec![C::new(4.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)],
        ]);
        let x = vec![C::new(1.0, 2.0), C::new(-1.0, 0.5), C::new(0.0, 3.0)];
        let b = a.mul_vec(&x);
        let y = Lu::factor(&a).solve(&b);
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).norm() < 1e-13);
        }
    }

    #[test]
    fn drop_first_removes_row_and_column() {
        let a = DenseMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(a.drop_first().to_rows(), vec![vec![5, 6], vec![8, 9]]);
    }
}

//! Small dense real matrices (dimension 2n with n tiny).

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{LabError, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct RMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> RMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self { rows: r, cols: c, data }
    }

    pub fn from_f64(rows: &[&[f64]]) -> Self {
        let conv: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect();
        let refs: Vec<&[T]> = conv.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Max-entry distance.
    pub fn dist(&self, other: &Self) -> T {
        (self - other).max_abs()
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square() && self.dist(&self.transpose()) <= tol
    }

    pub fn symmetrize(&self) -> Self {
        (self + &self.transpose()).scale(T::lit(0.5))
    }

    /// LU with partial pivoting; returns (lu, perm, sign) or `None` if exactly singular.
    fn lu(&self) -> Option<(Self, Vec<usize>, T)> {
        assert!(self.is_square(), "LU of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())?;
            if a[(p, k)] == T::zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                a[(i, k)] = f;
                for j in k + 1..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> T {
        match self.lu() {
            None => T::zero(),
            Some((lu, _, sign)) => (0..self.rows).fold(sign, |d, i| d * lu[(i, i)]),
        }
    }

    /// Inverse, failing when `|det| <= tol`.
    pub fn inverse_checked(&self, what: &str, tol: T) -> Result<Self> {
        let det = self.det();
        if det.abs() <= tol {
            return Err(LabError::Singular { what: what.to_string(), det: det.to_f64_lossy() });
        }
        let (lu, perm, _) = self.lu().expect("nonzero determinant");
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for col in 0..n {
            let mut y = vec![T::zero(); n];
            for i in 0..n {
                let mut s = if perm[i] == col { T::one() } else { T::zero() };
                for j in 0..i {
                    s -= lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * inv[(j, col)];
                }
                inv[(i, col)] = s / lu[(i, i)];
            }
        }
        Ok(inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_checked("matrix", T::zero())
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    /// Returns eigenvalues and the orthogonal matrix whose columns are eigenvectors.
    pub fn symmetric_eigen(&self) -> (Vec<T>, Self) {
        assert!(self.is_square(), "eigen of a non-square matrix");
        let n = self.rows;
        let mut a = self.symmetrize();
        let mut v = Self::identity(n);
        let eps = T::epsilon();
        for _sweep in 0..64 {
            let mut off = T::zero();
            for i in 0..n {
                for j in i + 1..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= eps * a.max_abs().max(T::min_positive_value()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)] == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)]).collect(), v)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        let (ev, _) = (&self.transpose() * self).symmetric_eigen();
        ev.into_iter().fold(T::zero(), |m, e| m.max(e)).sqrt()
    }

    /// Matrix exponential by scaling and squaring of a truncated Taylor series.
    pub fn expm(&self) -> Self {
        assert!(self.is_square(), "expm of a non-square matrix");
        let n = self.rows;
        let norm = self.max_abs() * T::from_usize_lossy(n);
        let mut s = 0u32;
        while T::lit(2f64.powi(s as i32)) < norm * T::lit(4.0) {
            s += 1;
        }
        let a = self.scale(T::one() / T::lit(2f64.powi(s as i32)));
        let mut term = Self::identity(n);
        let mut sum = Self::identity(n);
        for k in 1..=24 {
            term = (&term * &a).scale(T::one() / T::from_usize_lossy(k));
            sum = &sum + &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }
}

impl<T> Index<(usize, usize)> for RMat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for RMat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &RMat<T> {
    type Output = RMat<T>;
    fn mul(self, rhs: Self) -> RMat<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        RMat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |s, k| s + self[(i, k)] * rhs[(k, j)])
        })
    }
}

impl<T: Real> Add for &RMat<T> {
    type Output = RMat<T>;
    fn add(self, rhs: Self) -> RMat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        RMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl<T: Real> Sub for &RMat<T> {
    type Output = RMat<T>;
    fn sub(self, rhs: Self) -> RMat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        RMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect() }
    }
}

impl<T: Real> Neg for &RMat<T> {
    type Output = RMat<T>;
    fn neg(self) -> RMat<T> {
        self.scale(-T::one())
    }
}

/// Matrix-vector product.
pub fn mat_vec<T: Real>(m: &RMat<T>, v: &[T]) -> Vec<T> {
    assert_eq!(m.cols(), v.len(), "shape mismatch in mat_vec");
    (0..m.rows()).map(|i| (0..m.cols()).fold(T::zero(), |s, k| s + m[(i, k)] * v[k])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let a = RMat::<f64>::from_f64(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, -1.0], &[0.5, -1.0, 2.0]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).dist(&RMat::identity(3)) < 1e-14);
        let det = 4.0 * (6.0 - 1.0) - 1.0 * (2.0 + 0.5) + 0.5 * (-1.0 - 1.5);
        assert!((a.det() - det).abs() < 1e-13);
    }

    #[test]
    fn singular_is_reported() {
        let a = RMat::<f64>::from_f64(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(a.inverse(), Err(LabError::Singular { .. })));
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = RMat::<f64>::from_f64(&[&[2.0, -1.0, 0.3], &[-1.0, 0.5, 0.7], &[0.3, 0.7, -1.5]]);
        let (ev, v) = a.symmetric_eigen();
        let d = RMat::from_fn(3, 3, |i, j| if i == j { ev[i] } else { 0.0 });
        let back = &(&v * &d) * &v.transpose();
        assert!(back.dist(&a) < 1e-13);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 0.7f64;
        let g = RMat::<f64>::from_f64(&[&[0.0, t], &[-t, 0.0]]);
        let e: RMat<f64> = g.expm();
        let want = RMat::from_f64(&[&[t.cos(), t.sin()], &[-t.sin(), t.cos()]]);
        assert!(e.dist(&want) < 1e-14);
    }
}

//! Helpers for dense complex matrices stored as `ndarray::Array2`.

use ndarray::{Array2, ArrayView2, Zip};
use num_traits::Zero;

use crate::scalar::{Real, C};

pub type CMatrix<T> = Array2<C<T>>;

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    Array2::from_shape_fn((n, n), |(i, j)| if i == j { C::new(T::one(), T::zero()) } else { C::<T>::zero() })
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(a: ArrayView2<C<T>>) -> CMatrix<T> {
    let mut out = a.t().to_owned();
    out.mapv_inplace(|v| v.conj());
    out
}

pub fn fro_norm<T: Real>(a: ArrayView2<C<T>>) -> T {
    a.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt()
}

pub fn fro_dist<T: Real>(a: ArrayView2<C<T>>, b: ArrayView2<C<T>>) -> T {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    let mut s = T::zero();
    Zip::from(a).and(b).for_each(|x, y| s += (*x - *y).norm_sqr());
    s.sqrt()
}

/// `||a - b||_F / ||b||_F`.
pub fn rel_fro<T: Real>(a: ArrayView2<C<T>>, b: ArrayView2<C<T>>) -> T {
    fro_dist(a, b) / fro_norm(b)
}

pub fn max_abs_dist<T: Real>(a: ArrayView2<C<T>>, b: ArrayView2<C<T>>) -> T {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    let mut m = T::zero();
    Zip::from(a).and(b).for_each(|x, y| m = m.max((*x - *y).norm()));
    m
}

pub fn scale<T: Real>(a: ArrayView2<C<T>>, s: C<T>) -> CMatrix<T> {
    a.mapv(|v| v * s)
}

/// Hermitian inner product `<a, b> = sum conj(a) b`.
pub fn hdot<T: Real>(a: ArrayView2<C<T>>, b: ArrayView2<C<T>>) -> C<T> {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    let mut s = C::<T>::zero();
    Zip::from(a).and(b).for_each(|x, y| s += x.conj() * *y);
    s
}

/// Least-squares scalar `lambda` minimizing `||target - lambda * base||_F`.
pub fn best_scalar<T: Real>(base: ArrayView2<C<T>>, target: ArrayView2<C<T>>) -> C<T> {
    hdot(base, target) / hdot(base, base)
}

//! Independent quadrature oracles for oscillatory integrals with quadratic phase.
//!
//! Every integral here has the form `A * int e^{2 pi i B(t)} dt` with `B` a real
//! quadratic. It is evaluated with Gaussian damping `e^{-eps t^2}` at a geometric
//! sequence of `eps`, then extrapolated polynomially to `eps = 0`.

use num_traits::Zero;

use crate::error::{LabError, Result};
use crate::linalg::{mat_vec, RMat};
use crate::scalar::{cis2pi, re, Real, C};
use crate::sympcore::SympMatrix;

/// Damping schedule: `eps_k = eps0 * 2^{-k}`, `k < levels`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Damping {
    pub eps0: f64,
    pub levels: usize,
}

impl Default for Damping {
    fn default() -> Self {
        Self { eps0: 0.05, levels: 7 }
    }
}

/// Neville extrapolation of `(xs, ys)` to `x = 0`.
pub fn extrapolate_to_zero<T: Real>(xs: &[T], ys: &[C<T>]) -> C<T> {
    let mut p: Vec<C<T>> = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * (-xs[i + m]) - p[i + 1] * (-xs[i])) / (xs[i] - xs[i + m]);
        }
    }
    p[0]
}

/// Trapezoid value of `int e^{-eps t^2} e^{2 pi i B(t)} dt` for real quadratic `B`.
pub fn damped_value<T: Real>(phase: &dyn Fn(T) -> T, eps: T) -> C<T> {
    let b0 = phase(T::zero());
    let a2 = (phase(T::one()) + phase(-T::one()) - T::lit(2.0) * b0) * T::lit(0.5);
    let a1 = (phase(T::one()) - phase(-T::one())) * T::lit(0.5);
    let half_width = (T::lit(40.0) / eps).sqrt();
    let fmax = T::lit(2.0) * a2.abs() * half_width + a1.abs() + T::one();
    let h = T::one() / (T::lit(4.0) * fmax);
    let count = (half_width / h).ceil().to_usize().unwrap_or(0);
    let mut s = C::<T>::zero();
    for i in 0..=2 * count {
        let t = (T::from_usize_lossy(i) - T::from_usize_lossy(count)) * h;
        let w = if i == 0 || i == 2 * count { T::lit(0.5) } else { T::one() };
        s += cis2pi(phase(t)) * ((-eps * t * t).exp() * w);
    }
    s * h
}

/// `int e^{2 pi i B(t)} dt` by damping and extrapolation.
pub fn damped_integral<T: Real>(phase: &dyn Fn(T) -> T, damping: Damping) -> C<T> {
    let xs: Vec<T> = (0..damping.levels).map(|k| T::lit(damping.eps0 * 0.5f64.powi(k as i32))).collect();
    let ys: Vec<C<T>> = xs.iter().map(|&e| damped_value(phase, e)).collect();
    extrapolate_to_zero(&xs, &ys)
}

/// Numerical `int e^{-2 pi i u.v} e^{i pi X v.v} dv` for symmetric invertible `X`:
/// orthogonal diagonalization reduces it to a product of one-dimensional integrals.
pub fn fresnel_quadrature<T: Real>(x: &RMat<T>, u: &[T], damping: Damping) -> Result<C<T>> {
    if !x.is_square() || x.rows() != u.len() {
        return Err(LabError::Dimension("X must be m x m and u of length m".into()));
    }
    let (ev, q) = x.symmetric_eigen();
    let w = mat_vec(&q.transpose(), u);
    let mut prod = re(T::one());
    for (lam, wi) in ev.into_iter().zip(w) {
        let phase = move |t: T| -wi * t + lam * t * t * T::lit(0.5);
        prod *= damped_integral(&phase, damping);
    }
    Ok(prod)
}

/// Kernel entry of `sqrt|det(S - I)| int T_tau(S z) T_tau(-z) dz` at `(x, y)`, n = 1.
///
/// The composed operator maps `f` to `e^{2 pi i Phi(z, x)} f(x - ((S - I) z)_x)`, so its
/// kernel restricts the `z` integral to the line `((S - I) z)_x = x - y`.
pub fn composed_kernel_entry<T: Real>(s: &SympMatrix<T>, tau: T, x: T, y: T, damping: Damping) -> Result<C<T>> {
    let det = s.det_minus_identity();
    let r = (s.get(0, 0) - T::one(), s.get(0, 1));
    let rn = (r.0 * r.0 + r.1 * r.1).sqrt();
    if rn == T::zero() {
        return Err(LabError::Domain("first row of S - I vanishes".into()));
    }
    let d = x - y;
    let base = (d * r.0 / (rn * rn), d * r.1 / (rn * rn));
    let dir = (-r.1 / rn, r.0 / rn);
    let one = T::one();
    let phase = move |t: T| {
        let z = (base.0 + t * dir.0, base.1 + t * dir.1);
        let (x0, p0) = s.apply2(z.0, z.1);
        let (x1, p1) = (-z.0, -z.1);
        p0 * x - (one - tau) * p0 * x0 + p1 * (x - x0) - (one - tau) * p1 * x1
    };
    Ok(damped_integral(&phase, damping) * (det.abs().sqrt() / rn))
}

/// Kernel entry of `int s_sigma(z) T_tau(z) dz` with `s_sigma = |det(S - I)|^{-1/2} e^{i pi M z.z}`,
/// i.e. `|det(S - I)|^{-1/2} int e^{2 pi i p u} e^{i pi M (d, p).(d, p)} dp`.
pub fn twisted_kernel_entry<T: Real>(s: &SympMatrix<T>, tau: T, x: T, y: T, damping: Damping) -> Result<C<T>> {
    let m = crate::sympcore::cayley(s)?;
    let (m11, m12, m22) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    let det = s.det_minus_identity();
    let d = x - y;
    let u = tau * x + (T::one() - tau) * y;
    let phase = move |p: T| p * u + (m11 * d * d + T::lit(2.0) * m12 * d * p + m22 * p * p) * T::lit(0.5);
    Ok(damped_integral(&phase, damping) / det.abs().sqrt())
}

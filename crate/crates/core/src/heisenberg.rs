//! Heisenberg-Weyl operators `T(z0)` and their tau-variants `T_tau(z0)` on sampled functions.

use ndarray::Array2;
use num_traits::Zero;

use crate::cmat::CMatrix;
use crate::error::{LabError, Result};
use crate::gridfield::{Grid1D, SampledFunction};
use crate::scalar::{cis, cis2pi, Real, C};

/// Symplectic form `sigma(z, z') = p x' - p' x` (n = 1).
pub fn sigma<T: Real>(z: (T, T), zp: (T, T)) -> T {
    z.1 * zp.0 - zp.1 * z.0
}

/// `T_tau(z0)` bound to a grid; the shift `x0` is snapped to the lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeisenbergOp<T> {
    pub grid: Grid1D<T>,
    pub tau: T,
    pub x0: T,
    pub p0: T,
    shift: i64,
    snap_error: T,
}

impl<T: Real> HeisenbergOp<T> {
    /// Snaps `x0` to the nearest lattice point (tolerance `dx/2`).
    pub fn new(grid: Grid1D<T>, tau: T, z0: (T, T)) -> Result<Self> {
        Self::with_snap_tol(grid, tau, z0, grid.dx() * T::lit(0.5))
    }

    /// Like [`HeisenbergOp::new`] but rejecting shifts farther than `tol` from the lattice.
    pub fn with_snap_tol(grid: Grid1D<T>, tau: T, z0: (T, T), tol: T) -> Result<Self> {
        let (shift, offset) = grid.nearest_shift(z0.0);
        if offset.abs() > tol {
            return Err(LabError::Alignment { shift: z0.0.to_f64_lossy(), offset: offset.to_f64_lossy(), limit: tol.to_f64_lossy() });
        }
        let x0 = T::from_i64(shift).unwrap() * grid.dx();
        Ok(Self { grid, tau, x0, p0: z0.1, shift, snap_error: offset })
    }

    pub fn snap_error(&self) -> T {
        self.snap_error
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    fn source_index(&self, j: usize) -> usize {
        (j as i64 - self.shift).rem_euclid(self.grid.n() as i64) as usize
    }

    fn phase(&self, j: usize) -> C<T> {
        let one = T::one();
        cis2pi(self.p0 * self.grid.x(j) - (one - self.tau) * self.p0 * self.x0)
    }

    /// `(T_tau(z0) f)(x) = e^{2 pi i (p0 x - (1 - tau) p0 x0)} f(x - x0)`, periodic.
    pub fn apply(&self, f: &SampledFunction<T>) -> SampledFunction<T> {
        assert_eq!(f.grid.n(), self.grid.n(), "grid mismatch");
        let values = (0..self.grid.n()).map(|j| self.phase(j) * f.values[self.source_index(j)]).collect();
        SampledFunction { grid: self.grid, values }
    }

    /// Linear map as an `N x N` matrix.
    pub fn matrix(&self) -> CMatrix<T> {
        let n = self.grid.n();
        let mut m = Array2::zeros((n, n));
        for j in 0..n {
            m[(j, self.source_index(j))] = self.phase(j);
        }
        m
    }
}

/// `T(z0) f`, the symmetric (tau = 1/2) Heisenberg operator.
pub fn apply_t<T: Real>(z0: (T, T), f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    Ok(HeisenbergOp::new(f.grid, T::lit(0.5), z0)?.apply(f))
}

/// `T_tau(z0) f`.
pub fn apply_t_tau<T: Real>(tau: T, z0: (T, T), f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    Ok(HeisenbergOp::new(f.grid, tau, z0)?.apply(f))
}

/// `e^{2 pi i sigma(z0, z1)}`, the phase in `T(z0)T(z1) = e^{2 pi i sigma(z0,z1)} T(z1)T(z0)`.
pub fn commutator_phase<T: Real>(z0: (T, T), z1: (T, T)) -> C<T> {
    cis2pi(sigma(z0, z1))
}

/// `e^{i pi (2 tau - 1) p0 x0}`, linking `T_tau(z0)` to `T(z0)`.
pub fn tau_link_phase<T: Real>(tau: T, z0: (T, T)) -> C<T> {
    cis(T::PI() * (T::lit(2.0) * tau - T::one()) * z0.1 * z0.0)
}

/// Phase `c` in `T_tau(z0)T_tau(z1) = c T_tau(z0 + z1)`:
/// `e^{i pi sigma(z0,z1)} e^{-i pi (2 tau - 1)(p0 x1 + p1 x0)}`.
/// The second factor vanishes only at tau = 1/2.
pub fn composition_phase<T: Real>(tau: T, z0: (T, T), z1: (T, T)) -> C<T> {
    let skew = (T::lit(2.0) * tau - T::one()) * (z0.1 * z1.0 + z1.1 * z0.0);
    cis(T::PI() * (sigma(z0, z1) - skew))
}

/// Sum of a matrix list weighted by complex coefficients.
pub fn weighted_sum<T: Real>(terms: &[(C<T>, CMatrix<T>)]) -> CMatrix<T> {
    let n = terms.first().map_or(0, |t| t.1.nrows());
    let mut out = Array2::from_elem((n, n), C::<T>::zero());
    for (w, m) in terms {
        out.zip_mut_with(m, |o, v| *o += *w * *v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfield::Signal;

    fn grid() -> Grid1D<f64> {
        Grid1D::new(64, 8.0).unwrap()
    }

    #[test]
    fn identity_shift_and_modulation() {
        let g = grid();
        let f = Signal::Gaussian { width: 0.7, center: 0.2, freq: 0.3 }.sample(&g);
        assert_eq!(apply_t((0.0, 0.0), &f).unwrap(), f);
        let shifted = apply_t((g.dx(), 0.0), &f).unwrap();
        for j in 0..g.n() {
            assert_eq!(shifted.values[j], f.values[(j + g.n() - 1) % g.n()]);
        }
        let p0 = 0.37;
        let m = apply_t((0.0, p0), &f).unwrap();
        for j in 0..g.n() {
            assert!((m.values[j] - f.values[j] * cis2pi(p0 * g.x(j))).norm() < 1e-15);
        }
    }

    #[test]
    fn tau_half_and_link() {
        let g = grid();
        let f = Signal::Chirp(0.4).sample(&g);
        let z = (3.0 * g.dx(), 0.71);
        assert_eq!(apply_t_tau(0.5, z, &f).unwrap(), apply_t(z, &f).unwrap());
        let z1 = (1.0, 1.0);
        let a = apply_t_tau(1.0, z1, &f).unwrap();
        let b = apply_t(z1, &f).unwrap();
        for j in 0..g.n() {
            assert!((a.values[j] + b.values[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn inverse_law() {
        let g = grid();
        let f = Signal::Hermite(2).sample(&g);
        let z = (-5.0 * g.dx(), 0.9);
        let back = apply_t_tau(0.3, (-z.0, -z.1), &apply_t_tau(0.7, z, &f).unwrap()).unwrap();
        assert!(back.max_abs_dist(&f) < 1e-14);
    }

    #[test]
    fn commutator_examples() {
        let g = Grid1D::<f64>::new(128, 16.0).unwrap();
        let want = cis2pi(-1.0 / 128.0);
        assert!((commutator_phase((g.dx(), 0.0), (0.0, g.dp())) - want).norm() < 1e-15);
        let a = HeisenbergOp::new(g, 0.5, (g.dx(), 0.0)).unwrap().matrix();
        let b = HeisenbergOp::new(g, 0.5, (0.0, g.dp())).unwrap().matrix();
        let lhs = a.dot(&b);
        let rhs = b.dot(&a).mapv(|v| v * want);
        assert!(crate::cmat::max_abs_dist(lhs.view(), rhs.view()) < 1e-14);
        assert_eq!(commutator_phase((0.3, 0.2), (0.3, 0.2)), C::new(1.0, 0.0));
        assert!((commutator_phase((0.0, 0.4), (0.5, 0.0)) - cis2pi(0.2)).norm() < 1e-15);
    }

    #[test]
    fn strict_snap_rejects_off_grid() {
        let g = grid();
        let r = HeisenbergOp::with_snap_tol(g, 0.5, (0.3 * g.dx(), 0.0), 1e-9);
        assert!(matches!(r, Err(LabError::Alignment { .. })));
        let op = HeisenbergOp::new(g, 0.5, (2.2 * g.dx(), 0.0)).unwrap();
        assert_eq!(op.shift(), 2);
        assert!((op.snap_error() - 0.2 * g.dx()).abs() < 1e-15);
    }

    #[test]
    fn unitary_matrix() {
        let g = grid();
        let u = HeisenbergOp::new(g, 0.2, (7.0 * g.dx(), -1.3)).unwrap().matrix();
        let uu = crate::cmat::adjoint(u.view()).dot(&u);
        assert!(crate::cmat::max_abs_dist(uu.view(), crate::cmat::identity::<f64>(g.n()).view()) < 1e-13);
    }
}

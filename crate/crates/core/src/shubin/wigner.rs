use ndarray::Array2;
use num_traits::Zero;

use super::kernel::{op_tau_kernel, QuadSpec};
use super::symbol::SymbolSpec;
use crate::error::{LabError, Result};
use crate::gridfield::{fourier, BandLimited, PhaseTable, SampledFunction};
use crate::scalar::{cis2pi, re, Real, C};

/// Cross tau-Wigner table
/// `W(x_j, p_k) = dy sum_m e^{-2 pi i y_m p_k} f(x_j + tau y_m) conj(g(x_j - (1 - tau) y_m))`.
///
/// Off-grid values of `f` and `g` come from their band-limited interpolants, so arguments
/// outside the window see the periodic extension.
pub fn wigner_tau<T: Real>(f: &SampledFunction<T>, g: &SampledFunction<T>, tau: T) -> PhaseTable<T> {
    let grid = f.grid;
    let n = grid.n();
    let xs = grid.xs();
    let fy: Vec<T> = xs.iter().map(|&y| tau * y).collect();
    let gy: Vec<T> = xs.iter().map(|&y| -(T::one() - tau) * y).collect();
    let fv = BandLimited::new(f).eval_outer(&xs, &fy);
    let gv = BandLimited::new(g).eval_outer(&xs, &gy);
    let h = Array2::from_shape_fn((n, n), |(j, m)| fv[(j, m)] * gv[(j, m)].conj());
    let e = Array2::from_shape_fn((n, n), |(m, k)| grid.dft_phase(k, m));
    let dx = re(grid.dx());
    PhaseTable { grid, data: h.dot(&e).mapv(|v| v * dx) }
}

/// `W_tau(f, g)` at arbitrary phase-space points.
pub fn wigner_tau_at<T: Real>(f: &SampledFunction<T>, g: &SampledFunction<T>, tau: T, points: &[(T, T)]) -> Vec<C<T>> {
    if points.is_empty() {
        return Vec::new();
    }
    let grid = f.grid;
    let ys = grid.xs();
    let fy: Vec<T> = ys.iter().map(|&y| tau * y).collect();
    let gy: Vec<T> = ys.iter().map(|&y| -(T::one() - tau) * y).collect();
    let px: Vec<T> = points.iter().map(|z| z.0).collect();
    let fv = BandLimited::new(f).eval_outer(&px, &fy);
    let gv = BandLimited::new(g).eval_outer(&px, &gy);
    let dx = grid.dx();
    points
        .iter()
        .enumerate()
        .map(|(r, &(_, p))| {
            let s = (0..grid.n()).fold(C::<T>::zero(), |s, m| s + cis2pi(-ys[m] * p) * fv[(r, m)] * gv[(r, m)].conj());
            s * dx
        })
        .collect()
}

/// Relative `L^1` residuals of the two marginals:
/// `sum_k W dp = |f|^2` and `sum_j W dx = |F f|^2`.
pub fn marginal_residuals<T: Real>(w: &PhaseTable<T>, f: &SampledFunction<T>) -> (T, T) {
    let grid = w.grid;
    let n = grid.n();
    let fh = fourier(f);
    let mut num_x = T::zero();
    let mut den_x = T::zero();
    let mut num_p = T::zero();
    let mut den_p = T::zero();
    for j in 0..n {
        let s = (0..n).fold(C::<T>::zero(), |s, k| s + w.data[(j, k)]) * grid.dp();
        let want = f.values[j].norm_sqr();
        num_x += (s - re(want)).norm();
        den_x += want;
    }
    for k in 0..n {
        let s = (0..n).fold(C::<T>::zero(), |s, j| s + w.data[(j, k)]) * grid.dx();
        let want = fh.values[k].norm_sqr();
        num_p += (s - re(want)).norm();
        den_p += want;
    }
    (num_x / den_x, num_p / den_p)
}

/// `sum a(z) W(z) dx dp` (unconjugated).
pub fn phase_pairing<T: Real>(a: &PhaseTable<T>, w: &PhaseTable<T>) -> C<T> {
    a.data.iter().zip(w.data.iter()).fold(C::<T>::zero(), |s, (x, y)| s + *x * *y) * a.cell()
}

/// Outcome of a pairing comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairingResult<T> {
    pub operator_side: C<T>,
    pub phase_space_side: C<T>,
    pub residual: T,
    /// `true` when the denominator was negligible and `residual` is absolute.
    pub absolute: bool,
}

/// Compares `(Op_tau(a) f | g)` with `sum a(z) W_tau(f, g)(z) dx dp`.
pub fn pairing_check<T: Real>(
    a: &SymbolSpec<T>,
    tau: T,
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
) -> Result<PairingResult<T>> {
    if f.grid != g.grid {
        return Err(LabError::Dimension("f and g on different grids".into()));
    }
    let op = op_tau_kernel(a, tau, &f.grid, QuadSpec::default())?;
    let lhs = op.apply(f).inner(g);
    let w = wigner_tau(f, g, tau);
    let rhs = phase_pairing(&a.tabulate(&f.grid)?, &w);
    let diff = (lhs - rhs).norm();
    let absolute = lhs.norm() < T::lit(1e-12);
    let residual = if absolute { diff } else { diff / lhs.norm() };
    Ok(PairingResult { operator_side: lhs, phase_space_side: rhs, residual, absolute })
}

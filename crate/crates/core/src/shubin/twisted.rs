use ndarray::Array2;
use num_traits::Zero;
use rustfft::FftPlanner;

use super::operator::OperatorMatrix;
use crate::error::{LabError, Result};
use crate::gridfield::PhaseTable;
use crate::scalar::{cis2pi, re, Real, C};

/// Exact re-evaluation period of the exponential recurrences.
const REFRESH: usize = 32;

/// `A = sum_{jk} a_sigma(z_jk) T_tau(z_jk) dx dp` over the phase lattice.
pub fn op_tau_twisted<T: Real>(a_sigma: &PhaseTable<T>, tau: T) -> Result<OperatorMatrix<T>> {
    let g = a_sigma.grid;
    let n = g.n();
    let half = n / 2;
    let dp = g.dp();
    let cell = re(g.dx() * dp);
    let mut map = Array2::<C<T>>::zeros((n, n));
    for j in 0..n {
        let x0 = g.x(j);
        let shift = j as i64 - half as i64;
        let row = a_sigma.data.row(j);
        if row.iter().all(|v| v.is_zero()) {
            continue;
        }
        for i in 0..n {
            // sum_k a(j,k) e^{2 pi i p_k t}, t = x_i - (1 - tau) x0
            let t = g.x(i) - (T::one() - tau) * x0;
            let step = cis2pi(dp * t);
            let mut e = cis2pi(g.p(0) * t);
            let mut s = C::<T>::zero();
            for k in 0..n {
                if k > 0 {
                    e = if k % REFRESH == 0 { cis2pi(g.p(k) * t) } else { e * step };
                }
                s += row[k] * e;
            }
            let col = (i as i64 - shift).rem_euclid(n as i64) as usize;
            map[(i, col)] += s * cell;
        }
    }
    let mut op = OperatorMatrix::from_linear_map(g, map)?;
    op.accuracy_contract = tau >= T::zero() && tau <= T::one();
    Ok(op)
}

/// Edge mass above which twisted composition is rejected.
pub const BOUNDARY_LIMIT: f64 = 1e-6;

/// Twisted product `c(z) = sum_{z'} e^{i pi sigma(z, z')} a(z - z') b(z') dx dp`
/// (periodic lattice indexing). This is the composition law for tau = 1/2.
pub fn compose_twisted<T: Real>(a: &PhaseTable<T>, b: &PhaseTable<T>) -> Result<PhaseTable<T>> {
    compose_twisted_tau(a, b, T::lit(0.5))
}

/// Twisted product for general tau. With `z0 = z - z'`, `z1 = z'` the phase is
/// `e^{i pi sigma(z0, z1)} e^{-i pi (2 tau - 1)(p0 x1 + p1 x0)}`, matching
/// `T_tau(z0) T_tau(z1) = phase * T_tau(z0 + z1)`.
pub fn compose_twisted_tau<T: Real>(a: &PhaseTable<T>, b: &PhaseTable<T>, tau: T) -> Result<PhaseTable<T>> {
    let g = a.grid;
    if b.grid != g {
        return Err(LabError::Dimension("twisted composition of tables on different grids".into()));
    }
    let limit = T::lit(BOUNDARY_LIMIT);
    for (name, t) in [("a", a), ("b", b)] {
        let edge = t.edge_magnitude(1) * t.cell();
        if edge > limit {
            return Err(LabError::Accuracy(format!("boundary mass of {name} is {edge:e}")));
        }
    }
    let n = g.n();
    let half = n / 2;
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    // FFT of every row of `a`, rotated so that index 0 holds the zero-momentum offset.
    let mut a_hat = Array2::<C<T>>::zeros((n, n));
    for r in 0..n {
        let mut buf: Vec<C<T>> = (0..n).map(|m| a.data[(r, (m + half) % n)]).collect();
        fwd.process(&mut buf);
        for (k, v) in buf.into_iter().enumerate() {
            a_hat[(r, k)] = v;
        }
    }
    let one = T::one();
    let two = T::lit(2.0);
    let skew = two * tau - one;
    // b~(j', k') = b(j', k') e^{2 pi i (2 tau - 1) p_k' x_j'}
    let b_tilde = Array2::from_shape_fn((n, n), |(jp, kp)| b.data[(jp, kp)] * cis2pi(skew * g.p(kp) * g.x(jp)));
    let inv_n = re(one / T::from_usize_lossy(n));
    let mut out = Array2::<C<T>>::zeros((n, n));
    let mut buf = vec![C::<T>::zero(); n];
    for j in 0..n {
        let xj = g.x(j);
        for jp in 0..n {
            let brow = b_tilde.row(jp);
            if brow.iter().all(|v| v.is_zero()) {
                continue;
            }
            let r = (j + n + half - jp) % n;
            let arow = a_hat.row(r);
            if arow.iter().all(|v| v.is_zero()) {
                continue;
            }
            for kp in 0..n {
                buf[kp] = brow[kp] * cis2pi(-tau * g.p(kp) * xj);
            }
            fwd.process(&mut buf);
            for k in 0..n {
                buf[k] *= arow[k];
            }
            inv.process(&mut buf);
            let xjp = g.x(jp);
            for k in 0..n {
                out[(j, k)] += buf[k] * inv_n * cis2pi((one - tau) * g.p(k) * xjp);
            }
        }
    }
    let cell = re(a.cell());
    out.mapv_inplace(|v| v * cell);
    Ok(PhaseTable { grid: g, data: out })
}

use ndarray::Array2;
use num_traits::Zero;

use super::operator::{position_power_map, momentum_power_map, OperatorMatrix};
use super::symbol::{ClosedForm, Poly2, SymbolSpec, MAX_DEGREE};
use crate::cmat::CMatrix;
use crate::error::{LabError, Result};
use crate::gridfield::Grid1D;
use crate::scalar::{im, re, Real, C};

/// Trapezoid rule on `[-p_max, p_max]` with `m` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadSpec<T> {
    pub p_max: T,
    pub m: usize,
}

impl<T: Real> Default for QuadSpec<T> {
    fn default() -> Self {
        Self { p_max: T::lit(8.0), m: 513 }
    }
}

impl<T: Real> QuadSpec<T> {
    pub fn step(&self) -> T {
        T::lit(2.0) * self.p_max / T::from_usize_lossy(self.m - 1)
    }

    pub fn node(&self, i: usize) -> T {
        -self.p_max + T::from_usize_lossy(i) * self.step()
    }
}

/// Integrand magnitude at `+-p_max` above which the kernel build is rejected.
pub const NONDECAY_LIMIT: f64 = 1e-6;
/// Nodes whose Gaussian envelope is below `e^{-ENVELOPE_CUTOFF}` of the peak are skipped.
const ENVELOPE_CUTOFF: f64 = 70.0;
/// Exact re-evaluation period of the multiplicative exponential recurrence.
const REFRESH: usize = 32;

fn in_contract<T: Real>(tau: T) -> bool {
    tau >= T::zero() && tau <= T::one()
}

/// `Op_tau(a)` from the kernel `K(x, y) = int e^{2 pi i p (x - y)} a(tau x + (1 - tau) y, p) dp`.
///
/// Polynomial symbols are quantized exactly with grid matrices
/// (`x^a p^b -> sum_i C(a,i) tau^i (1-tau)^(a-i) X^i P^b X^(a-i)`); symbols with Gaussian
/// decay in `p` use the trapezoid rule described by `quad`.
pub fn op_tau_kernel<T: Real>(a: &SymbolSpec<T>, tau: T, grid: &Grid1D<T>, quad: QuadSpec<T>) -> Result<OperatorMatrix<T>> {
    let cf = a
        .closed_form()
        .ok_or_else(|| LabError::Validation("the kernel route needs a closed-form symbol".into()))?;
    let mut op = if cf.is_polynomial() {
        polynomial_operator(&cf.poly, tau, grid)?.scaled(cf.c.exp())
    } else if cf.decays_in_p() {
        quadrature_operator(cf, tau, grid, quad)?
    } else {
        return Err(LabError::Accuracy("symbol neither polynomial nor Gaussian-decaying in p".into()));
    };
    op.accuracy_contract = in_contract(tau);
    Ok(op)
}

/// Binomial coefficient as a float.
pub(crate) fn binom<T: Real>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1))
}

/// Exact grid quantization of a polynomial symbol.
pub fn polynomial_operator<T: Real>(poly: &Poly2<T>, tau: T, grid: &Grid1D<T>) -> Result<OperatorMatrix<T>> {
    let n = grid.n();
    let xs: Vec<CMatrix<T>> = (0..=MAX_DEGREE).map(|a| position_power_map(grid, a)).collect();
    let mut map: CMatrix<T> = Array2::zeros((n, n));
    for (a, b, c) in poly.terms() {
        let pb = momentum_power_map(grid, b);
        for i in 0..=a {
            let w = binom::<T>(a, i) * tau.powi(i as i32) * (T::one() - tau).powi((a - i) as i32);
            if w == T::zero() {
                continue;
            }
            let term = xs[i].dot(&pb).dot(&xs[a - i]);
            let wc = c * w;
            map.zip_mut_with(&term, |m, t| *m += wc * *t);
        }
    }
    OperatorMatrix::from_linear_map(*grid, map)
}

/// Exact grid realization of the tau-average over `[0, 1]` of a polynomial symbol's
/// quantization: `x^a p^b -> (a + 1)^{-1} sum_i X^i P^b X^(a-i)`.
pub fn polynomial_operator_bj<T: Real>(poly: &Poly2<T>, grid: &Grid1D<T>) -> Result<OperatorMatrix<T>> {
    let n = grid.n();
    let mut map: CMatrix<T> = Array2::zeros((n, n));
    for (a, b, c) in poly.terms() {
        let pb = momentum_power_map(grid, b);
        let wc = c / T::from_usize_lossy(a + 1);
        for i in 0..=a {
            let term = position_power_map(grid, i).dot(&pb).dot(&position_power_map(grid, a - i));
            map.zip_mut_with(&term, |m, t| *m += wc * *t);
        }
    }
    OperatorMatrix::from_linear_map(*grid, map)
}

fn horner<T: Real>(coeffs: &[C<T>; MAX_DEGREE + 1], deg: usize, p: T) -> C<T> {
    let mut s = coeffs[deg];
    for b in (0..deg).rev() {
        s = s * p + coeffs[b];
    }
    s
}

fn quadrature_operator<T: Real>(cf: &ClosedForm<T>, tau: T, grid: &Grid1D<T>, quad: QuadSpec<T>) -> Result<OperatorMatrix<T>> {
    if quad.m < 3 || quad.m.is_multiple_of(2) || quad.p_max <= T::zero() || quad.p_max.is_nan() {
        return Err(LabError::Validation("quadrature needs an odd node count >= 3 and p_max > 0".into()));
    }
    let n = grid.n();
    let h = quad.step();
    let deg = cf.poly.degree();
    let pi = T::PI();
    let two_pi = T::TAU();
    let cq = im(pi) * cf.q[1][1];
    let q2 = (cq * (T::lit(2.0) * h * h)).exp();
    let limit = T::lit(NONDECAY_LIMIT);
    let mut kernel = Array2::<C<T>>::zeros((n, n));
    let last = quad.m - 1;
    for j in 0..n {
        let x = grid.x(j);
        for k in 0..n {
            let y = grid.x(k);
            let u = tau * x + (T::one() - tau) * y;
            let d = x - y;
            let pc = cf.poly.in_p(u);
            let a0 = im(pi) * cf.q[0][0] * (u * u) + im(two_pi) * cf.b[0] * u + cf.c;
            let b0 = im(two_pi) * (cf.q[0][1] * u + cf.b[1] + re(d));
            let g = |p: T| a0 + b0 * p + cq * (p * p);
            for edge in [-quad.p_max, quad.p_max] {
                let mag = horner(&pc, deg, edge).norm() * g(edge).re.exp();
                if mag > limit {
                    return Err(LabError::Accuracy(format!(
                        "p-integrand is {mag:e} at the boundary p = {edge} (entry {j},{k}); increase p_max"
                    )));
                }
            }
            let peak = (-b0.re / (T::lit(2.0) * cq.re)).max(-quad.p_max).min(quad.p_max);
            let m0 = ((peak + quad.p_max) / h).round().to_usize().unwrap_or(0).min(last);
            let env0 = g(quad.node(m0)).re;
            let cutoff = env0 - T::lit(ENVELOPE_CUTOFF);
            let weight = |m: usize| if m == 0 || m == last { h * T::lit(0.5) } else { h };
            let mut acc = C::<T>::zero();
            // march upward from the peak
            let mut m = m0;
            let mut e = g(quad.node(m)).exp();
            let mut r = (b0 * h + cq * h * (T::lit(2.0) * quad.node(m) + h)).exp();
            loop {
                let p = quad.node(m);
                acc += e * horner(&pc, deg, p) * weight(m);
                if m == last || g(p).re < cutoff {
                    break;
                }
                m += 1;
                if (m - m0).is_multiple_of(REFRESH) {
                    let pm = quad.node(m);
                    e = g(pm).exp();
                    r = (b0 * h + cq * h * (T::lit(2.0) * pm + h)).exp();
                } else {
                    e *= r;
                    r *= q2;
                }
            }
            // march downward
            if m0 > 0 {
                let mut m = m0 - 1;
                let mut e = g(quad.node(m)).exp();
                let mut s = (-b0 * h + cq * h * (h - T::lit(2.0) * quad.node(m))).exp();
                loop {
                    let p = quad.node(m);
                    acc += e * horner(&pc, deg, p) * weight(m);
                    if m == 0 || g(p).re < cutoff {
                        break;
                    }
                    m -= 1;
                    if (m0 - 1 - m).is_multiple_of(REFRESH) {
                        let pm = quad.node(m);
                        e = g(pm).exp();
                        s = (-b0 * h + cq * h * (h - T::lit(2.0) * pm)).exp();
                    } else {
                        e *= s;
                        s *= q2;
                    }
                }
            }
            kernel[(j, k)] = acc;
        }
    }
    OperatorMatrix::from_kernel(*grid, kernel)
}

/// Plain trapezoid evaluation of one kernel entry with direct exponentials.
/// Slow; used to cross-check the recurrence.
pub fn kernel_entry_direct<T: Real>(a: &SymbolSpec<T>, tau: T, x: T, y: T, quad: QuadSpec<T>) -> Result<C<T>> {
    let cf = a.closed_form().ok_or_else(|| LabError::Validation("closed-form symbol required".into()))?;
    let h = quad.step();
    let u = tau * x + (T::one() - tau) * y;
    let mut s = C::<T>::zero();
    for i in 0..quad.m {
        let p = quad.node(i);
        let w = if i == 0 || i == quad.m - 1 { h * T::lit(0.5) } else { h };
        s += crate::scalar::cis2pi(p * (x - y)) * cf.eval(u, p) * w;
    }
    Ok(s)
}

//! Intertwiners `R_tau(S)` for `S` in `Sp0` (n = 1): construction from the closed-form
//! twisted symbol `s(z) = |det(S - I)|^{-1/2} e^{i pi M(S) z.z}` and the identity checks
//! built on them.

pub mod oracle;

use ndarray::Array2;
use num_traits::{One, Zero};
use rand::Rng;

use crate::cmat::{self, CMatrix};
use crate::error::{LabError, Result};
use crate::gridfield::{probe_basis, BandLimited, Grid1D, SampledFunction};
use crate::linalg::{mat_vec, RMat};
use crate::scalar::{cis, Real, C};
use crate::shubin::{op_tau_kernel, wigner_tau, wigner_tau_at, OperatorMatrix, QuadSpec, SymbolSpec};
use crate::sympcore::{cayley, random_sp0, signature, CayleyMatrix, SympMatrix, SAMPLER_DET_TOL, SP0_DET_TOL};

/// Number of Hermite functions spanning the probe subspace.
pub const PROBE_DIM: usize = 8;

/// `|det X|^{-1/2} e^{i pi/4 sign X} e^{-i pi X^{-1} u.u}`, the value of
/// `int e^{-2 pi i u.v} e^{i pi X v.v} dv`.
pub fn fresnel<T: Real>(x: &RMat<T>, u: &[T]) -> Result<C<T>> {
    if !x.is_square() || x.rows() != u.len() {
        return Err(LabError::Dimension("X must be m x m and u of length m".into()));
    }
    if !x.is_symmetric(T::lit(1e-12) * (T::one() + x.max_abs())) {
        return Err(LabError::Validation("X must be symmetric".into()));
    }
    let xi = x.inverse_checked("X", T::lit(1e-14))?;
    let det = x.det();
    let q: T = mat_vec(&xi, u).iter().zip(u).map(|(a, b)| *a * *b).sum();
    let sign = T::lit(signature(x) as f64);
    Ok(cis(T::FRAC_PI_4() * sign - T::PI() * q) / det.abs().sqrt())
}

/// `S` together with its cached Cayley matrix and symbol normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerSpec<T> {
    pub s: SympMatrix<T>,
    pub tau: T,
    pub m: CayleyMatrix<T>,
    /// `|det(S - I)|^{-1/2}`.
    pub normalization: T,
}

impl<T: Real> IntertwinerSpec<T> {
    pub fn new(s: &SympMatrix<T>, tau: T) -> Result<Self> {
        if s.n() != 1 {
            return Err(LabError::Dimension("intertwiners are implemented for n = 1".into()));
        }
        let det = s.det_minus_identity();
        if det.abs() <= T::lit(SP0_DET_TOL) {
            return Err(LabError::Singular { what: "S - I".into(), det: det.to_f64_lossy() });
        }
        let m = cayley(s)?;
        Ok(Self { s: s.clone(), tau, m, normalization: T::one() / det.abs().sqrt() })
    }

    /// Twisted symbol `s(x, p)`.
    pub fn symbol(&self, x: T, p: T) -> C<T> {
        let (m11, m12, m22) = (self.m.get(0, 0), self.m.get(0, 1), self.m.get(1, 1));
        cis(T::PI() * (m11 * x * x + T::lit(2.0) * m12 * x * p + m22 * p * p)) * self.normalization
    }

    /// Chirp coefficients `(alpha, beta, gamma)` of the kernel phase
    /// `pi (alpha x^2 + beta x y + gamma y^2)`, defined when `m22 != 0`.
    pub fn chirp_coefficients(&self) -> (T, T, T) {
        chirp_coefficients(&self.m, self.tau)
    }
}

fn chirp_coefficients<T: Real>(m: &CayleyMatrix<T>, tau: T) -> (T, T, T) {
    let (m11, m12, m22) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    let a = tau + m12;
    let b = T::one() - tau - m12;
    let two = T::lit(2.0);
    (m11 - a * a / m22, -two * m11 - two * a * b / m22, m11 - b * b / m22)
}

/// `R_tau(S)` as a dense operator.
///
/// For `m22 != 0` the `p`-integral of the twisted symbol is a Fresnel integral and the kernel is
/// `c |m22|^{-1/2} e^{i pi/4 sgn m22} e^{i pi m11 d^2} e^{-i pi (u + m12 d)^2 / m22}` with
/// `d = x - y`, `u = tau x + (1 - tau) y`. For `m22 = 0` the integral is
/// `delta((tau + m12) x + (1 - tau - m12) y)` and the operator is a weighted dilation.
pub fn build_r<T: Real>(s: &SympMatrix<T>, tau: T, grid: &Grid1D<T>) -> Result<OperatorMatrix<T>> {
    let spec = IntertwinerSpec::new(s, tau)?;
    let (m11, m12, m22) = (spec.m.get(0, 0), spec.m.get(0, 1), spec.m.get(1, 1));
    let n = grid.n();
    let xs = grid.xs();
    let scale_m = T::one() + spec.m.matrix().max_abs();
    if m22.abs() > T::lit(1e-12) * scale_m {
        let pre = fresnel(&RMat::from_rows(&[&[m22]]), &[T::zero()])? * spec.normalization;
        let kernel = Array2::from_shape_fn((n, n), |(j, k)| {
            let (x, y) = (xs[j], xs[k]);
            let d = x - y;
            let w = tau * x + (T::one() - tau) * y + m12 * d;
            pre * cis(T::PI() * (m11 * d * d - w * w / m22))
        });
        return OperatorMatrix::from_kernel(*grid, kernel);
    }
    let alpha = tau + m12;
    let beta = T::one() - tau - m12;
    if beta.abs() < T::lit(1e-12) {
        return Err(LabError::Domain(format!(
            "R_tau(S) has kernel concentrated on x = 0 (tau = {tau}), which no grid operator represents"
        )));
    }
    let c = spec.normalization / beta.abs();
    let kappa = (alpha / beta).abs();
    let half = grid.l() * T::lit(0.5);
    let mut map = CMatrix::<T>::zeros((n, n));
    for (j, &x) in xs.iter().enumerate() {
        let ystar = -alpha * x / beta;
        // Inputs live on the window; a sample point outside it would read a periodic image.
        if ystar.abs() > half * (T::one() + T::lit(1e-12)) {
            continue;
        }
        let d = x - ystar;
        let amp = cis(T::PI() * m11 * d * d) * c;
        for (k, w) in BandLimited::weights(grid, ystar).into_iter().enumerate() {
            map[(j, k)] = amp * w;
        }
    }
    if kappa > T::one() {
        map = map.dot(&low_pass(n, T::from_usize_lossy(n) / (T::lit(2.0) * kappa)));
    }
    OperatorMatrix::from_linear_map(*grid, map)
}

/// Projection onto DFT modes `|m| < cutoff`. An expanding dilation by `kappa` keeps its
/// output below Nyquist only for inputs below `N / (2 kappa)`.
fn low_pass<T: Real>(n: usize, cutoff: T) -> CMatrix<T> {
    let nf = T::from_usize_lossy(n);
    let modes: Vec<i64> = (-(n as i64) / 2..(n as i64) / 2).filter(|&m| T::from_i64(m).unwrap().abs() < cutoff).collect();
    Array2::from_shape_fn((n, n), |(j, l)| {
        let t = T::from_i64(j as i64 - l as i64).unwrap();
        modes.iter().fold(C::<T>::zero(), |s, &m| s + cis(T::TAU() * T::from_i64(m).unwrap() * t / nf)) / nf
    })
}

/// `R_{1/2}(S)`, a metaplectic operator up to a fourth root of unity.
pub fn metaplectic_r<T: Real>(s: &SympMatrix<T>, grid: &Grid1D<T>) -> Result<OperatorMatrix<T>> {
    build_r(s, T::lit(0.5), grid)
}

/// `||R Op_tau(a) - Op_tau(a o S^{-1}) R||_F / ||R Op_tau(a)||_F` with `R = R_tau(S)`.
pub fn intertwine_residual<T: Real>(s: &SympMatrix<T>, tau: T, a: &SymbolSpec<T>, grid: &Grid1D<T>) -> Result<T> {
    let r = build_r(s, tau, grid)?;
    let q = QuadSpec::default();
    let op = op_tau_kernel(a, tau, grid, q)?;
    let moved = op_tau_kernel(&a.compose_linear(&s.inverse())?, tau, grid, q)?;
    let lhs = r.compose(&op);
    let rhs = moved.compose(&r);
    Ok(cmat::fro_dist(lhs.kernel.view(), rhs.kernel.view()) / cmat::fro_norm(lhs.kernel.view()))
}

/// Linear maps restricted to the probe subspace: `A V`.
fn on_probe<T: Real>(op: &OperatorMatrix<T>, v: &CMatrix<T>) -> CMatrix<T> {
    op.apply_block(v)
}

/// Candidate phase for the composition law.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseCandidate<T> {
    pub label: String,
    pub value: C<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleResult<T> {
    /// Least-squares `lambda` in `R(S S2) ~ lambda R(S) R(S2)`.
    pub phase_measured: C<T>,
    /// `e^{i pi/4 sign M(S S2)}`.
    pub phase_predicted: C<T>,
    pub residual: T,
    pub candidates: Vec<PhaseCandidate<T>>,
    /// Labels of candidates within `1e-5` of the measured phase.
    pub matched: Vec<String>,
}

/// Compares `R_tau(S S2)` with `R_tau(S) R_tau(S2)` on the probe subspace.
pub fn cocycle_check<T: Real>(s: &SympMatrix<T>, s2: &SympMatrix<T>, tau: T, grid: &Grid1D<T>) -> Result<CocycleResult<T>> {
    let prod = s.compose(s2);
    if prod.det_minus_identity().abs() <= T::lit(SP0_DET_TOL) {
        return Err(LabError::Domain("S S2 is not in Sp0".into()));
    }
    let m1 = cayley(s)?;
    let m2 = cayley(s2)?;
    let m12 = cayley(&prod)?;
    let v = probe_basis(grid, PROBE_DIM);
    let p = on_probe(&build_r(s, tau, grid)?, &on_probe(&build_r(s2, tau, grid)?, &v));
    let r = on_probe(&build_r(&prod, tau, grid)?, &v);
    let lambda = cmat::best_scalar(p.view(), r.view());
    let residual = cmat::fro_dist(r.view(), p.mapv(|z| z * lambda).view()) / cmat::fro_norm(r.view());
    let sig_prod = T::lit(signature(m12.matrix()) as f64);
    let sig_sum = T::lit(signature(&(m1.matrix() + m2.matrix())) as f64);
    let q = T::FRAC_PI_4();
    let candidates = vec![
        PhaseCandidate { label: "exp(+i pi/4 sign M(SS'))".into(), value: cis(q * sig_prod) },
        PhaseCandidate { label: "exp(-i pi/4 sign M(SS'))".into(), value: cis(-q * sig_prod) },
        PhaseCandidate { label: "exp(+i pi/4 sign(M+M'))".into(), value: cis(q * sig_sum) },
        PhaseCandidate { label: "exp(-i pi/4 sign(M+M'))".into(), value: cis(-q * sig_sum) },
    ];
    let matched = candidates
        .iter()
        .filter(|c| (c.value - lambda).norm() <= T::lit(1e-5))
        .map(|c| c.label.clone())
        .collect();
    Ok(CocycleResult { phase_measured: lambda, phase_predicted: cis(q * sig_prod), residual, candidates, matched })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseAdjointResult<T> {
    /// `||R_tau(S^{-1}) R_tau(S) V - V||_F / sqrt(K)`.
    pub inv_residual: T,
    /// `||(R_tau(S^{-1}) - R_{1-tau}(S)^*) V||_F / ||R_tau(S^{-1}) V||_F`.
    pub adj_residual: T,
    /// `||R_{1-tau}(S)^* R_tau(S) V - V||_F / sqrt(K)`.
    pub inverse_adjoint_residual: T,
    /// `||(R V)^* (R V) - I||_F / sqrt(K)`.
    pub unitarity_defect: T,
}

/// Each link of `R_tau(S^{-1}) = R_tau(S)^{-1} = R_{1-tau}(S)^*`, reported separately.
pub fn inverse_adjoint_check<T: Real>(s: &SympMatrix<T>, tau: T, grid: &Grid1D<T>) -> Result<InverseAdjointResult<T>> {
    let r = build_r(s, tau, grid)?;
    let r_inv = build_r(&s.inverse(), tau, grid)?;
    let r_dual = build_r(s, T::one() - tau, grid)?.adjoint();
    let v = probe_basis(grid, PROBE_DIM);
    let sk = T::from_usize_lossy(PROBE_DIM).sqrt();
    let rv = on_probe(&r, &v);
    let inv_residual = cmat::fro_dist(on_probe(&r_inv, &rv).view(), v.view()) / sk;
    let inverse_adjoint_residual = cmat::fro_dist(on_probe(&r_dual, &rv).view(), v.view()) / sk;
    let adj_residual = cmat::rel_fro(on_probe(&r_dual, &v).view(), on_probe(&r_inv, &v).view());
    let gram = cmat::adjoint(rv.view()).dot(&rv);
    let unitarity_defect = cmat::fro_dist(gram.view(), cmat::identity::<T>(PROBE_DIM).view()) / sk;
    Ok(InverseAdjointResult { inv_residual, adj_residual, inverse_adjoint_residual, unitarity_defect })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceResult<T> {
    pub residual: T,
    /// Fraction of interior points whose preimage `S^{-1} z` left the window.
    pub excluded_fraction: T,
}

/// `max |W_tau(R_tau(S) f, R_{1-tau}(S) g)(z) - W_tau(f, g)(S^{-1} z)| / max |W_tau(f, g)|`
/// over the central half of the phase window. The right side is evaluated directly at
/// `S^{-1} z`.
pub fn wigner_covariance_check<T: Real>(
    s: &SympMatrix<T>,
    tau: T,
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
) -> Result<CovarianceResult<T>> {
    let grid = f.grid;
    let rf = build_r(s, tau, &grid)?.apply(f);
    let rg = build_r(s, T::one() - tau, &grid)?.apply(g);
    let lhs = wigner_tau(&rf, &rg, tau);
    let base = wigner_tau(f, g, tau);
    let xw = grid.l() * T::lit(0.5);
    let pw = T::from_usize_lossy(grid.n()) * grid.dp() * T::lit(0.5);
    let si = s.inverse();
    let mut idx = Vec::new();
    let mut pts = Vec::new();
    let mut interior = 0usize;
    for j in 0..grid.n() {
        for k in 0..grid.n() {
            let (x, p) = (grid.x(j), grid.p(k));
            if x.abs() > xw * T::lit(0.5) || p.abs() > pw * T::lit(0.5) {
                continue;
            }
            interior += 1;
            let w = si.apply2(x, p);
            if w.0.abs() >= xw || w.1.abs() >= pw {
                continue;
            }
            idx.push((j, k));
            pts.push(w);
        }
    }
    let rhs = wigner_tau_at(f, g, tau, &pts);
    let residual = idx
        .iter()
        .zip(&rhs)
        .fold(T::zero(), |m, (&(j, k), v)| m.max((lhs.data[(j, k)] - *v).norm()))
        / base.max_abs();
    let excluded = T::from_usize_lossy(interior - idx.len()) / T::from_usize_lossy(interior.max(1));
    Ok(CovarianceResult { residual, excluded_fraction: excluded })
}

/// Bounds under which `R_tau(S)` and `R_tau(S^{-1})` are resolved on a grid with
/// `N = 128` and `L = sqrt(N)`.
///
/// With kernel phase `pi (alpha x^2 + beta x y + gamma y^2)`, the local frequency of the
/// summand over either variable is bounded by `|alpha| + |beta|` (resp. `|gamma| + |beta|`)
/// times the scale of the probe states; keeping that below `max_rate` keeps the summation
/// away from the aliasing band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolvability {
    pub max_rate: f64,
    pub min_m22: f64,
    pub max_singular_value: f64,
    pub taus: [f64; 3],
}

impl Default for Resolvability {
    fn default() -> Self {
        Self { max_rate: 3.5, min_m22: 0.25, max_singular_value: 2.5, taus: [0.3, 0.5, 0.7] }
    }
}

impl Resolvability {
    /// Applies the bounds to `S` alone.
    pub fn accepts_one<T: Real>(&self, s: &SympMatrix<T>) -> bool {
        if s.det_minus_identity().abs() < T::lit(SAMPLER_DET_TOL) {
            return false;
        }
        let Ok(m) = cayley(s) else { return false };
        if m.get(1, 1).abs() < T::lit(self.min_m22) {
            return false;
        }
        if s.matrix().spectral_norm() > T::lit(self.max_singular_value) {
            return false;
        }
        let limit = T::lit(self.max_rate);
        self.taus.iter().all(|&t| {
            let (a, b, g) = chirp_coefficients(&m, T::lit(t));
            a.abs() + b.abs() <= limit && g.abs() + b.abs() <= limit
        })
    }

    /// Applies the bounds to `S` and `S^{-1}`.
    pub fn accepts<T: Real>(&self, s: &SympMatrix<T>) -> bool {
        self.accepts_one(s) && self.accepts_one(&s.inverse())
    }
}

/// Draws `count` resolvable `Sp0` samples.
pub fn sample_resolvable<T: Real, R: Rng + ?Sized>(rng: &mut R, count: usize, bounds: &Resolvability) -> Vec<SympMatrix<T>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = random_sp0::<T, R>(rng, 1);
        if bounds.accepts(&s) {
            out.push(s);
        }
    }
    out
}

/// Outcome of testing the two printed readings of the `S = J` kernel against quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelAdjudication<T> {
    /// Max relative error of `e^{i pi/4} e^{i pi d^2/2} e^{-2 pi i u^2}` after a scalar fit.
    pub with_i: T,
    /// Same for `e^{i pi/4} e^{i pi d^2/2} e^{-2 pi u^2}`.
    pub without_i: T,
}

impl<T: Real> KernelAdjudication<T> {
    /// The hypothesis that matches within `tol`, if exactly one does.
    pub fn verdict(&self, tol: T) -> Option<&'static str> {
        match (self.with_i <= tol, self.without_i <= tol) {
            (true, false) => Some("with i"),
            (false, true) => Some("without i"),
            _ => None,
        }
    }
}

/// Fits each kernel reading to `reference` values at `points` by one complex scalar and
/// returns the max relative error of each.
pub fn adjudicate_j_kernel<T: Real>(tau: T, points: &[(T, T)], reference: &[C<T>]) -> KernelAdjudication<T> {
    let hyp = |with_i: bool| -> Vec<C<T>> {
        points
            .iter()
            .map(|&(x, y)| {
                let d = x - y;
                let u = tau * x + (T::one() - tau) * y;
                let chirp = cis(T::FRAC_PI_4() + T::PI() * d * d * T::lit(0.5));
                if with_i {
                    chirp * cis(-T::TAU() * u * u)
                } else {
                    chirp * (-T::TAU() * u * u).exp()
                }
            })
            .collect()
    };
    let err = |h: Vec<C<T>>| -> T {
        let num = h.iter().zip(reference).fold(C::<T>::zero(), |s, (a, b)| s + a.conj() * *b);
        let den = h.iter().fold(T::zero(), |s, a| s + a.norm_sqr());
        let lam = if den > T::zero() { num / den } else { C::<T>::one() };
        let scale = reference.iter().fold(T::zero(), |m, r| m.max(r.norm()));
        h.iter().zip(reference).fold(T::zero(), |m, (a, b)| m.max((*a * lam - *b).norm())) / scale
    };
    KernelAdjudication { with_i: err(hyp(true)), without_i: err(hyp(false)) }
}

/// Kernel entries `K(x, y)` of a built operator at arbitrary grid-point pairs.
pub fn kernel_at<T: Real>(op: &OperatorMatrix<T>, pairs: &[(usize, usize)]) -> Vec<C<T>> {
    pairs.iter().map(|&(j, k)| op.kernel[(j, k)]).collect()
}

#[cfg(test)]
mod tests;

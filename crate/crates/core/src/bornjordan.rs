//! Born-Jordan quantization: the multiplier `Theta(z) = sin(pi p x)/(pi p x)`, `T_BJ`, `Op_BJ`
//! as a Weyl operator with twisted symbol `a_sigma Theta`, `W_BJ`, and the reduced
//! metaplectic covariance.

use ndarray::Array2;
use num_traits::Zero;

use crate::cmat::{self, CMatrix};
use crate::error::{LabError, Result};
use crate::gridfield::{fourier_matrix, probe_basis, Grid1D, PhaseTable, SampledFunction};
use crate::heisenberg::HeisenbergOp;
use crate::intertwine::PROBE_DIM;
use crate::scalar::{cis, re, Real, C};
use crate::shubin::{op_tau_kernel, op_tau_twisted, polynomial_operator_bj, wigner_tau, OperatorMatrix, QuadSpec, SymbolSpec};
use crate::sympcore::{generator, Generator, SympMatrix};

/// Default number of Gauss-Legendre nodes for tau-averages.
pub const DEFAULT_NODES: usize = 16;

/// `Theta(x, p) = sin(pi p x) / (pi p x)`, with the Taylor branch near `p x = 0`.
pub fn theta<T: Real>(x: T, p: T) -> T {
    let px = p * x;
    let t = T::PI() * px;
    if px.abs() < T::lit(1e-8) {
        let t2 = t * t;
        return T::one() - t2 / T::lit(6.0) + t2 * t2 / T::lit(120.0);
    }
    t.sin() / t
}

/// `Theta` tabulated on the phase lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaField<T> {
    pub grid: Grid1D<T>,
    pub data: Array2<T>,
}

impl<T: Real> ThetaField<T> {
    pub fn new(grid: Grid1D<T>) -> Self {
        let data = Array2::from_shape_fn((grid.n(), grid.n()), |(j, k)| theta(grid.x(j), grid.p(k)));
        Self { grid, data }
    }

    /// Multiplies a phase table pointwise by `Theta`.
    pub fn apply(&self, a: &PhaseTable<T>) -> PhaseTable<T> {
        let mut out = a.clone();
        out.data.zip_mut_with(&self.data, |v, t| *v *= *t);
        out
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(T::lit(0.5 * (1.0 - x)));
        weights.push(T::lit(1.0 / ((1.0 - x * x) * dp * dp)));
    }
    (nodes, weights)
}

/// `T_BJ(z) = Theta(z) T(z)` as a linear map.
pub fn t_bj<T: Real>(grid: Grid1D<T>, z: (T, T)) -> Result<CMatrix<T>> {
    let t = HeisenbergOp::new(grid, T::lit(0.5), z)?.matrix();
    Ok(t.mapv(|v| v * theta(z.0, z.1)))
}

/// `int_0^1 T_tau(z) dtau` by Gauss-Legendre quadrature.
pub fn t_bj_quadrature<T: Real>(grid: Grid1D<T>, z: (T, T), nodes: usize) -> Result<CMatrix<T>> {
    let (ts, ws) = gauss_legendre::<T>(nodes);
    let mut acc = CMatrix::<T>::zeros((grid.n(), grid.n()));
    for (t, w) in ts.into_iter().zip(ws) {
        let m = HeisenbergOp::new(grid, t, z)?.matrix();
        acc.scaled_add(re(w), &m);
    }
    Ok(acc)
}

/// `Op_BJ(a)`: exact tau-average for polynomial symbols, otherwise the Weyl operator with
/// twisted symbol `a_sigma Theta`.
pub fn op_bj<T: Real>(a: &SymbolSpec<T>, grid: &Grid1D<T>) -> Result<OperatorMatrix<T>> {
    if let Some(cf) = a.closed_form() {
        if cf.is_polynomial() {
            return polynomial_operator_bj(&cf.poly.scale(cf.c.exp()), grid);
        }
    }
    let sigma = a.twisted(grid)?;
    op_tau_twisted(&ThetaField::new(*grid).apply(&sigma), T::lit(0.5))
}

/// `int_0^1 Op_tau(a) dtau` by Gauss-Legendre quadrature of the kernel route.
pub fn op_bj_quadrature<T: Real>(a: &SymbolSpec<T>, grid: &Grid1D<T>, nodes: usize) -> Result<OperatorMatrix<T>> {
    let (ts, ws) = gauss_legendre::<T>(nodes);
    let mut acc = OperatorMatrix::zeros(*grid);
    for (t, w) in ts.into_iter().zip(ws) {
        acc = acc.add(&op_tau_kernel(a, t, grid, QuadSpec::default())?.scaled(re(w)));
    }
    Ok(acc)
}

/// `int_0^1 W_tau(f, g) dtau` by Gauss-Legendre quadrature.
pub fn wigner_bj<T: Real>(f: &SampledFunction<T>, g: &SampledFunction<T>, nodes: usize) -> PhaseTable<T> {
    let (ts, ws) = gauss_legendre::<T>(nodes);
    let mut acc = PhaseTable::zeros(f.grid);
    for (t, w) in ts.into_iter().zip(ws) {
        acc.data.scaled_add(re(w), &wigner_tau(f, g, t).data);
    }
    acc
}

/// `||A - A^*||_F / ||A||_F` for `A = Op_BJ(a)`.
pub fn bj_self_adjoint_defect<T: Real>(a: &SymbolSpec<T>, grid: &Grid1D<T>) -> Result<T> {
    let op = op_bj(a, grid)?;
    Ok(cmat::rel_fro(op.adjoint().kernel.view(), op.kernel.view()))
}

/// Unitary on the grid realizing a generator (`n = 1`):
/// `J -> e^{i pi/4} F`, `M(L) -> sqrt(L) f(L x)` for `L = 2^k`, `V(P) -> e^{i pi P x^2}`.
pub fn generator_unitary<T: Real>(kind: &Generator<T>, grid: &Grid1D<T>) -> Result<CMatrix<T>> {
    let n = grid.n();
    match kind {
        Generator::J => {
            if !grid.is_square() {
                return Err(LabError::Validation("J-hat needs a square grid (dx = dp)".into()));
            }
            Ok(fourier_matrix(grid).mapv(|v| v * cis(T::FRAC_PI_4())))
        }
        Generator::M(l) => {
            if l.rows() != 1 {
                return Err(LabError::Dimension("only n = 1 generators are realized on the grid".into()));
            }
            let lv = l[(0, 0)];
            let k = lv.log2().round();
            if lv <= T::zero() || (lv - T::lit(2.0).powf(k)).abs() > T::lit(1e-12) || k < T::zero() {
                return Err(LabError::Validation(format!("scaling {lv} does not map the grid into itself (need L = 2^k)")));
            }
            let step = lv.to_i64().unwrap_or(1);
            let half = (n / 2) as i64;
            let amp = re(lv.sqrt());
            let mut m = CMatrix::<T>::zeros((n, n));
            for j in 0..n {
                let src = half + step * (j as i64 - half);
                if (0..n as i64).contains(&src) {
                    m[(j, src as usize)] = amp;
                }
            }
            Ok(m)
        }
        Generator::V(p) => {
            if p.rows() != 1 {
                return Err(LabError::Dimension("only n = 1 generators are realized on the grid".into()));
            }
            let pv = p[(0, 0)];
            let mut m = CMatrix::<T>::zeros((n, n));
            for j in 0..n {
                let x = grid.x(j);
                m[(j, j)] = cis(T::PI() * pv * x * x);
            }
            Ok(m)
        }
    }
}

/// `x p^2 e^{-pi (x^2 + p^2)}`, the cubic test symbol.
pub fn cubic_test_symbol<T: Real>() -> SymbolSpec<T> {
    use crate::shubin::Poly2;
    let one = T::one();
    let zero = T::zero();
    SymbolSpec::gaussian_poly([[one, zero], [zero, one]], [zero, zero], Poly2::monomial(1, 2, re(one)))
}

/// `||S Op_BJ(a) - Op_BJ(a o S^{-1}) S|| / ||S Op_BJ(a)||` with `S` the generator's unitary.
/// `J` is measured on full matrices; `M(L)` and `V(P)` on the probe subspace, since the
/// grid cannot carry them as full-matrix unitaries.
pub fn bj_covariance_residual<T: Real>(kind: &Generator<T>, a: &SymbolSpec<T>, grid: &Grid1D<T>) -> Result<T> {
    let u = generator_unitary(kind, grid)?;
    let s: SympMatrix<T> = generator(kind, 1)?;
    let op = op_bj(a, grid)?.linear_map();
    let moved = op_bj(&a.compose_linear(&s.inverse())?, grid)?.linear_map();
    let lhs = u.dot(&op);
    let rhs = moved.dot(&u);
    if matches!(kind, Generator::J) {
        return Ok(cmat::fro_dist(lhs.view(), rhs.view()) / cmat::fro_norm(lhs.view()));
    }
    let v = probe_basis(grid, PROBE_DIM);
    let lv = lhs.dot(&v);
    let rv = rhs.dot(&v);
    Ok(cmat::fro_dist(lv.view(), rv.view()) / cmat::fro_norm(lv.view()))
}

/// `max |Theta(S^{-1} z) - Theta(z)|` over the lattice.
pub fn theta_invariance<T: Real>(kind: &Generator<T>, grid: &Grid1D<T>) -> Result<T> {
    let si = generator(kind, 1)?.inverse();
    let mut worst = T::zero();
    for j in 0..grid.n() {
        for k in 0..grid.n() {
            let (x, p) = (grid.x(j), grid.p(k));
            let w = si.apply2(x, p);
            worst = worst.max((theta(w.0, w.1) - theta(x, p)).abs());
        }
    }
    Ok(worst)
}

/// Sum of `|W|` weights, used to confirm the total mass `sum W dx dp = ||f||^2`.
pub fn total_mass<T: Real>(w: &PhaseTable<T>) -> C<T> {
    w.data.iter().fold(C::<T>::zero(), |s, v| s + *v) * w.cell()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::max_abs_dist;
    use crate::shubin::{marginal_residuals, momentum_map, position_map, Poly2};

    fn grid() -> Grid1D<f64> {
        Grid1D::square(128).unwrap()
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(3.0f64, 0.0), 1.0);
        assert_eq!(theta(0.0f64, 2.0), 1.0);
        assert!((theta(1.0f64, 0.5) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!(theta(1.0f64, 1.0).abs() < 1e-15);
        assert!((theta(1e-5f64, 1e-4) - 1.0).abs() < 1e-15);
        let t = ThetaField::new(grid());
        assert!(t.data.iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(5);
        for deg in 0..10 {
            let s: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(deg)).sum();
            assert!((s - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "degree {deg}");
        }
        let (x1, w1) = gauss_legendre::<f64>(1);
        assert!((x1[0] - 0.5).abs() < 1e-15 && (w1[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn t_bj_is_theta_times_weyl() {
        let g = grid();
        for &z in &[(g.x(70), g.p(66)), (g.x(50), g.p(75)), (g.x(64), g.p(90))] {
            let a = t_bj(g, z).unwrap();
            let b = t_bj_quadrature(g, z, 32).unwrap();
            assert!(max_abs_dist(a.view(), b.view()) <= 1e-10);
        }
    }

    #[test]
    fn linear_and_quadratic_symbols() {
        let g = grid();
        let x = op_bj(&SymbolSpec::monomial(1, 0), &g).unwrap();
        assert!(max_abs_dist(x.linear_map().view(), position_map(&g).view()) <= 1e-10);
        let xp = op_bj(&SymbolSpec::monomial(1, 1), &g).unwrap();
        let (xm, pm) = (position_map(&g), momentum_map(&g));
        let weyl = (xm.dot(&pm) + pm.dot(&xm)).mapv(|v| v * 0.5);
        assert!(max_abs_dist(xp.linear_map().view(), weyl.view()) <= 1e-8);
        let q = op_bj_quadrature(&SymbolSpec::monomial(1, 1), &g, 16).unwrap();
        assert!(max_abs_dist(q.linear_map().view(), weyl.view()) <= 1e-10);
    }

    #[test]
    fn midpoint_rule_is_weyl_and_differs_from_bj() {
        let g = grid();
        let a = SymbolSpec::polynomial(Poly2::monomial(2, 2, re(1.0)));
        let mid = op_bj_quadrature(&a, &g, 1).unwrap();
        let bj = op_bj(&a, &g).unwrap();
        let weyl = op_tau_kernel(&a, 0.5, &g, QuadSpec::default()).unwrap();
        assert!(mid.rel_dist(&weyl) <= 1e-12);
        assert!(mid.rel_dist(&bj) >= 1e-3);
    }

    #[test]
    fn gaussian_routes_agree() {
        let g = grid();
        for a in [SymbolSpec::standard_gaussian(), cubic_test_symbol()] {
            let twisted = op_bj(&a, &g).unwrap();
            let quad = op_bj_quadrature(&a, &g, DEFAULT_NODES).unwrap();
            assert!(twisted.rel_dist(&quad) <= 1e-5, "{}", twisted.rel_dist(&quad));
        }
        assert!(bj_self_adjoint_defect(&cubic_test_symbol(), &g).unwrap() <= 1e-8);
    }

    #[test]
    fn wigner_bj_marginals_and_pairing() {
        let g = grid();
        let f = crate::gridfield::Signal::standard().sample(&g);
        let w = wigner_bj(&f, &f, DEFAULT_NODES);
        let (rx, rp) = marginal_residuals(&w, &f);
        assert!(rx <= 1e-6 && rp <= 1e-6);
        assert!((total_mass(&w) - re(f.norm_sqr())).norm() <= 1e-7);
        assert!(w.data.iter().all(|v| v.im.abs() <= 1e-10));
        // pairing: (Op_BJ(a) f | h) = sum a W_BJ(f, h)
        let h = crate::gridfield::Signal::Gaussian { width: 1.1, center: 0.4, freq: 0.3 }.sample(&g);
        let a = SymbolSpec::standard_gaussian();
        let lhs = op_bj(&a, &g).unwrap().apply(&f).inner(&h);
        let rhs = crate::shubin::phase_pairing(&a.tabulate(&g).unwrap(), &wigner_bj(&f, &h, DEFAULT_NODES));
        assert!((lhs - rhs).norm() <= 1e-5 * lhs.norm().max(1e-3));
    }

    #[test]
    fn reduced_covariance() {
        let g = grid();
        let gauss = SymbolSpec::standard_gaussian();
        assert!(bj_covariance_residual(&Generator::J, &gauss, &g).unwrap() <= 1e-5);
        assert!(bj_covariance_residual(&Generator::m_scalar(2.0), &gauss, &g).unwrap() <= 1e-5);
        let v = bj_covariance_residual(&Generator::v_scalar(1.0), &cubic_test_symbol(), &g).unwrap();
        assert!(v >= 1e-2, "{v}");
        assert!(generator_unitary(&Generator::m_scalar(3.0), &g).is_err());
    }

    #[test]
    fn theta_invariance_examples() {
        let g = grid();
        assert!(theta_invariance(&Generator::J, &g).unwrap() <= 1e-12);
        assert!(theta_invariance(&Generator::m_scalar(3.0), &g).unwrap() <= 1e-12);
        assert!(theta_invariance(&Generator::v_scalar(1.0), &g).unwrap() > 0.1);
        let s = generator(&Generator::v_scalar(1.0), 1).unwrap().inverse();
        let w = s.apply2(1.0f64, 0.25);
        assert!((theta(w.0, w.1) - theta(1.0f64, 0.25)).abs() > 0.1);
    }

    #[test]
    fn bj_commutator_law_holds_composition_law_does_not() {
        let g = grid();
        let z0 = (g.x(70), g.p(67));
        let z1 = (g.x(61), g.p(66));
        let a = t_bj(g, z0).unwrap();
        let b = t_bj(g, z1).unwrap();
        let ph = crate::heisenberg::commutator_phase(z0, z1);
        let ab = a.dot(&b);
        let ba = b.dot(&a).mapv(|v| v * ph);
        assert!(max_abs_dist(ab.view(), ba.view()) <= 1e-12);
        let sum = t_bj(g, (z0.0 + z1.0, z0.1 + z1.1)).unwrap();
        let comp = sum.mapv(|v| v * cis(std::f64::consts::PI * crate::heisenberg::sigma(z0, z1)));
        assert!(max_abs_dist(ab.view(), comp.view()) > 1e-3);
    }
}

use num_traits::Zero;

use super::*;
use crate::cmat;
use crate::gridfield::{fourier, Grid1D, PhaseTable, SampledFunction, Signal};
use crate::heisenberg::HeisenbergOp;
use crate::scalar::{cis2pi, re, C};
use std::f64::consts::PI;

fn grid() -> Grid1D<f64> {
    Grid1D::square(128).unwrap()
}

fn gauss(g: &Grid1D<f64>) -> SampledFunction<f64> {
    Signal::standard().sample(g)
}

fn test_symbol() -> SymbolSpec<f64> {
    SymbolSpec::gaussian([[1.0, 0.3], [0.3, 2.0]], [0.3, -0.2])
}

#[test]
fn position_symbol_is_multiplication() {
    let g = grid();
    for tau in [0.0, 0.3, 1.0] {
        let op = op_tau_kernel(&SymbolSpec::monomial(1, 0), tau, &g, QuadSpec::default()).unwrap();
        let d = cmat::max_abs_dist(op.linear_map().view(), position_map(&g).view());
        assert!(d < 1e-13, "tau {tau}: {d}");
    }
}

#[test]
fn momentum_symbol_differentiates() {
    let g = grid();
    let f = gauss(&g);
    let op = op_tau_kernel(&SymbolSpec::monomial(0, 1), 0.4, &g, QuadSpec::default()).unwrap();
    let want = SampledFunction::from_fn(g, |x| C::new(0.0, x) * (2f64.powf(0.25) * (-PI * x * x).exp()));
    let got = op.apply(&f);
    assert!(got.rel_l2_dist(&want) <= 1e-8, "{}", got.rel_l2_dist(&want));
}

#[test]
fn xp_symbol_matches_ordered_products() {
    let g = grid();
    let f = gauss(&g);
    for tau in [0.0, 0.5, 1.0] {
        let op = op_tau_kernel(&SymbolSpec::monomial(1, 1), tau, &g, QuadSpec::default()).unwrap();
        let want = SampledFunction::from_fn(g, |x| {
            let fx = 2f64.powf(0.25) * (-PI * x * x).exp();
            C::new(0.0, x * x - (1.0 - tau) / (2.0 * PI)) * fx
        });
        let err = op.apply(&f).rel_l2_dist(&want);
        assert!(err <= 1e-7, "tau {tau}: {err}");
    }
}

#[test]
fn recurrence_matches_direct_trapezoid() {
    let g = grid();
    let a = SymbolSpec::gaussian_poly([[1.0, 0.3], [0.3, 2.0]], [0.3, -0.2], Poly2::monomial(1, 2, re(1.0)));
    let q = QuadSpec::default();
    let op = op_tau_kernel(&a, 0.3, &g, q).unwrap();
    for (j, k) in [(64, 64), (60, 70), (10, 100), (127, 0), (80, 81)] {
        let direct = kernel_entry_direct(&a, 0.3, g.x(j), g.x(k), q).unwrap();
        assert!((op.kernel[(j, k)] - direct).norm() < 1e-13 * (1.0 + direct.norm()), "({j},{k})");
    }
}

#[test]
fn nondecaying_symbols_are_rejected() {
    let g = grid();
    let wide = SymbolSpec::gaussian([[1.0, 0.0], [0.0, 0.01]], [0.0, 0.0]);
    assert!(matches!(op_tau_kernel(&wide, 0.5, &g, QuadSpec::default()), Err(crate::LabError::Accuracy(_))));
    let chirp = SymbolSpec::ClosedForm(ClosedForm { q: [[re(1.0), C::<f64>::zero()], [C::<f64>::zero(), re(1.0)]], b: [C::<f64>::zero(); 2], c: C::<f64>::zero(), poly: Poly2::one() });
    assert!(op_tau_kernel(&chirp, 0.5, &g, QuadSpec::default()).is_err());
}

#[test]
fn tau_outside_unit_interval_is_flagged() {
    let g = Grid1D::square(32).unwrap();
    let op = op_tau_kernel(&SymbolSpec::standard_gaussian(), 1.5, &g, QuadSpec::default()).unwrap();
    assert!(!op.accuracy_contract);
}

#[test]
fn twisted_deltas() {
    let g = grid();
    let id = op_tau_twisted(&PhaseTable::delta(g, 64, 64), 0.3).unwrap();
    assert!(cmat::max_abs_dist(id.linear_map().view(), cmat::identity::<f64>(128).view()) < 1e-12);
    let (j, k) = (70, 55);
    let t = op_tau_twisted(&PhaseTable::delta(g, j, k), 0.3).unwrap();
    let want = HeisenbergOp::new(g, 0.3, (g.x(j), g.p(k))).unwrap().matrix();
    assert!(cmat::max_abs_dist(t.linear_map().view(), want.view()) < 1e-12);
}

#[test]
fn routes_agree_on_gaussians() {
    let g = grid();
    let a = test_symbol();
    let a_sigma = a.twisted(&g).unwrap();
    for tau in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let k = op_tau_kernel(&a, tau, &g, QuadSpec::default()).unwrap();
        let t = op_tau_twisted(&a_sigma, tau).unwrap();
        let r = t.rel_dist(&k);
        assert!(r <= 1e-6, "tau {tau}: {r}");
    }
}

#[test]
fn adjoint_law_examples() {
    let g = grid();
    let a = SymbolSpec::<f64>::standard_gaussian();
    assert!(adjoint_check(&a, 0.5, &g).unwrap() <= 1e-8);
    assert!(adjoint_check(&SymbolSpec::monomial(1, 1), 1.0, &g).unwrap() <= 1e-8);
    let ia = test_symbol().scaled(C::new(0.0, 1.0));
    assert!(adjoint_check(&ia, 0.3, &g).unwrap() <= 1e-8);
    // explicit matrices: Op_1(xp) = X P and Op_0(xp) = P X
    let x = position_map(&g);
    let p = momentum_map(&g);
    let op1 = op_tau_kernel(&SymbolSpec::monomial(1, 1), 1.0, &g, QuadSpec::default()).unwrap();
    assert!(cmat::max_abs_dist(op1.linear_map().view(), x.dot(&p).view()) < 1e-12);
}

#[test]
fn twisted_composition_of_deltas() {
    let g = grid();
    let (j0, k0, j1, k1) = (70usize, 60usize, 61usize, 66usize);
    let c = compose_twisted(&PhaseTable::delta(g, j0, k0), &PhaseTable::delta(g, j1, k1)).unwrap();
    let z0 = (g.x(j0), g.p(k0));
    let z1 = (g.x(j1), g.p(k1));
    let phase = crate::scalar::cis(PI * crate::heisenberg::sigma(z0, z1));
    let mut want = PhaseTable::zeros(g);
    want.data[(j0 + j1 - 64, k0 + k1 - 64)] = phase * 128.0;
    assert!(c.max_abs_dist(&want) < 1e-10);
    let a = test_symbol().twisted(&g).unwrap();
    let same = compose_twisted(&a, &PhaseTable::delta(g, 64, 64)).unwrap();
    assert!(same.max_abs_dist(&a) < 1e-12 * a.max_abs().max(1.0));
}

#[test]
fn twisted_composition_matches_operator_product() {
    let g = grid();
    let a = test_symbol().twisted(&g).unwrap();
    let b = SymbolSpec::gaussian([[1.5, -0.2], [-0.2, 0.8]], [-0.1, 0.25]).twisted(&g).unwrap();
    let prod = op_tau_twisted(&a, 0.5).unwrap().compose(&op_tau_twisted(&b, 0.5).unwrap());
    let c = op_tau_twisted(&compose_twisted(&a, &b).unwrap(), 0.5).unwrap();
    assert!(c.rel_dist(&prod) <= 1e-5, "{}", c.rel_dist(&prod));
    let tau = 0.3;
    let prod = op_tau_twisted(&a, tau).unwrap().compose(&op_tau_twisted(&b, tau).unwrap());
    let c = op_tau_twisted(&compose_twisted_tau(&a, &b, tau).unwrap(), tau).unwrap();
    assert!(c.rel_dist(&prod) <= 1e-5, "{}", c.rel_dist(&prod));
}

#[test]
fn wigner_of_standard_gaussian() {
    let g = grid();
    let f = gauss(&g);
    let w = wigner_tau(&f, &f, 0.5);
    let want = PhaseTable::from_fn(g, |x, p| re(2.0 * (-2.0 * PI * (x * x + p * p)).exp()));
    assert!(w.max_abs_dist(&want) <= 1e-6);
    assert!(w.data.iter().all(|v| v.im.abs() <= 1e-10));
}

#[test]
fn rihaczek_and_dual() {
    let g = grid();
    let f = Signal::Gaussian { width: 0.8, center: 0.4, freq: -0.3 }.sample(&g);
    let h = Signal::Chirp(0.5).sample(&g);
    let w1 = wigner_tau(&f, &h, 1.0);
    let fh = fourier(&f);
    let want = PhaseTable::from_fn(g, |x, p| {
        let j = ((x / g.dx()).round() as i64 + 64) as usize;
        let k = ((p / g.dp()).round() as i64 + 64) as usize;
        cis2pi(x * p) * fh.values[k] * h.values[j].conj()
    });
    assert!(w1.max_abs_dist(&want) <= 1e-6);
    let w0 = wigner_tau(&h, &f, 0.0);
    let d = w0.data.iter().zip(w1.data.iter()).fold(0.0f64, |m, (a, b)| m.max((*a - b.conj()).norm()));
    assert!(d < 1e-12);
}

#[test]
fn marginals_all_tau() {
    let g = grid();
    let f = Signal::TwoGaussian { separation: 2.0 }.sample(&g);
    for tau in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let (rx, rp) = marginal_residuals(&wigner_tau(&f, &f, tau), &f);
        assert!(rx <= 1e-7 && rp <= 1e-7, "tau {tau}: {rx} {rp}");
    }
}

#[test]
fn pairing_examples() {
    let g = grid();
    let f = gauss(&g);
    let h = Signal::Gaussian { width: 1.2, center: -0.3, freq: 0.2 }.sample(&g);
    let one = pairing_check(&SymbolSpec::monomial(0, 0), 0.4, &f, &h).unwrap();
    assert!(one.residual <= 1e-9);
    assert!((one.operator_side - f.inner(&h)).norm() < 1e-12);
    let xg = SymbolSpec::gaussian_poly([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], Poly2::monomial(1, 0, re(1.0)));
    let r = pairing_check(&xg, 0.25, &f, &h).unwrap();
    assert!(r.residual <= 1e-6, "{}", r.residual);
    let p = pairing_check(&SymbolSpec::monomial(0, 1), 0.5, &f, &f).unwrap();
    assert!(p.operator_side.norm() <= 1e-9 && p.phase_space_side.norm() <= 1e-9);
    let c = pairing_check(&test_symbol(), 0.7, &h, &f).unwrap();
    assert!(c.residual <= 1e-6, "{}", c.residual);
}

#[test]
fn single_precision_build() {
    let g = Grid1D::<f32>::square(32).unwrap();
    let a = SymbolSpec::<f32>::standard_gaussian();
    let k = op_tau_kernel(&a, 0.5, &g, QuadSpec::default()).unwrap();
    let t = op_tau_twisted(&a.twisted(&g).unwrap(), 0.5).unwrap();
    assert!(t.rel_dist(&k) < 1e-3);
    assert!(!k.kernel.iter().any(|v: &C<f32>| v.is_zero() && false));
}

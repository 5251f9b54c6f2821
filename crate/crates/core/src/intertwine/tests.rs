use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{composed_kernel_entry, damped_integral, fresnel_quadrature, twisted_kernel_entry, Damping};
use super::*;
use crate::gridfield::{fourier_matrix, Signal};
use crate::scalar::re;

fn grid() -> Grid1D<f64> {
    Grid1D::square(128).unwrap()
}

fn close(a: C<f64>, b: C<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn fresnel_examples() {
    let one = RMat::from_f64(&[&[1.0]]);
    let mone = RMat::from_f64(&[&[-1.0]]);
    assert!(close(fresnel(&one, &[0.0]).unwrap(), cis(std::f64::consts::FRAC_PI_4), 1e-14));
    assert!(close(fresnel(&mone, &[0.0]).unwrap(), cis(-std::f64::consts::FRAC_PI_4), 1e-14));
    let id2 = RMat::<f64>::identity(2);
    assert!(close(fresnel(&id2, &[1.0, 0.0]).unwrap(), C::new(0.0, -1.0), 1e-14));
    assert!(fresnel(&RMat::from_f64(&[&[0.0]]), &[1.0]).is_err());
}

#[test]
fn fresnel_matches_damped_quadrature() {
    let cases: Vec<(RMat<f64>, Vec<f64>)> = vec![
        (RMat::from_f64(&[&[1.0]]), vec![0.0]),
        (RMat::from_f64(&[&[-0.7]]), vec![0.4]),
        (RMat::from_f64(&[&[0.5]]), vec![2.0]),
        (RMat::from_f64(&[&[1.0, 0.3], &[0.3, -0.8]]), vec![0.2, -0.5]),
    ];
    for (x, u) in cases {
        let exact = fresnel(&x, &u).unwrap();
        let num = fresnel_quadrature(&x, &u, Damping::default()).unwrap();
        assert!(close(exact, num, 1e-8), "{x:?} {u:?}: {exact} vs {num}");
    }
}

#[test]
fn neville_recovers_polynomial_limit() {
    let phase = |t: f64| 0.5 * t * t;
    let v = damped_integral(&phase, Damping::default());
    assert!(close(v, cis(std::f64::consts::FRAC_PI_4), 1e-9));
}

#[test]
fn r_of_j_is_fourier_at_half() {
    let g = grid();
    let r = build_r(&SympMatrix::j(1), 0.5, &g).unwrap();
    let target = fourier_matrix(&g).mapv(|v| v * cis(std::f64::consts::FRAC_PI_4));
    assert!(cmat::rel_fro(r.linear_map().view(), target.view()) <= 1e-6);
}

#[test]
fn r_of_minus_identity_is_parity_at_half() {
    let g = grid();
    let r = build_r(&SympMatrix::minus_identity(1), 0.5, &g).unwrap();
    let n = g.n();
    let flip = Array2::from_shape_fn((n, n), |(j, k)| if (j + k) % n == 0 { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) });
    assert!(cmat::max_abs_dist(r.linear_map().view(), flip.view()) <= 1e-12);
}

#[test]
fn r_of_minus_identity_is_a_dilation_off_half() {
    let g = grid();
    let tau = 0.3;
    let r = build_r(&SympMatrix::minus_identity(1), tau, &g).unwrap();
    let f = Signal::standard().sample(&g);
    let out = r.apply(&f);
    let expect = SampledFunction::from_fn(g, |x| re(2f64.powf(0.25) * (-std::f64::consts::PI * (tau * x / (1.0 - tau)).powi(2)).exp() / (2.0 * (1.0 - tau))));
    assert!(out.max_abs_dist(&expect) <= 1e-10);
    assert!(build_r(&SympMatrix::minus_identity(1), 1.0, &g).is_err());
}

#[test]
fn expanding_dilation_does_not_wrap() {
    let g = grid();
    let f = Signal::standard().sample(&g);
    let out = build_r(&SympMatrix::minus_identity(1), 0.7, &g).unwrap().apply(&f);
    let want = SampledFunction::from_fn(g, |x| re(2f64.powf(0.25) * (-std::f64::consts::PI * (7.0 * x / 3.0).powi(2)).exp() / 0.6));
    assert!(out.max_abs_dist(&want) < 1e-6);
    for tau in [0.3, 0.7] {
        let h = inverse_adjoint_check(&SympMatrix::minus_identity(1), tau, &g).unwrap();
        assert!(h.adj_residual < 1e-4, "tau {tau}: {}", h.adj_residual);
    }
}

#[test]
fn identity_is_rejected() {
    assert!(build_r(&SympMatrix::identity(1), 0.5, &grid()).is_err());
}

#[test]
fn intertwining_at_half() {
    let g = grid();
    let a = SymbolSpec::standard_gaussian();
    assert!(intertwine_residual(&SympMatrix::minus_identity(1), 0.5, &a, &g).unwrap() <= 1e-6);
    assert!(intertwine_residual(&SympMatrix::j(1), 0.5, &a, &g).unwrap() <= 1e-5);
}

#[test]
fn cocycle_j_j() {
    let g = grid();
    let j = SympMatrix::j(1);
    let c = cocycle_check(&j, &j, 0.5, &g).unwrap();
    assert!((c.phase_measured.norm() - 1.0).abs() <= 1e-5);
    assert!(c.residual <= 1e-5);
    assert!(close(c.phase_predicted, C::new(1.0, 0.0), 1e-14));
    assert_eq!(c.matched, vec!["exp(-i pi/4 sign(M+M'))".to_string()]);
    assert!(cocycle_check(&j, &j.inverse(), 0.5, &g).is_err());
}

#[test]
fn inverse_adjoint_links() {
    let g = grid();
    let j = SympMatrix::j(1);
    let h = inverse_adjoint_check(&j, 0.5, &g).unwrap();
    assert!(h.inv_residual <= 1e-5 && h.adj_residual <= 1e-5 && h.unitarity_defect <= 1e-5);
    let t = inverse_adjoint_check(&j, 0.3, &g).unwrap();
    assert!(t.adj_residual <= 1e-5);
    // R_tau(J) = c_tau * metaplectic with |c_tau|^2 = 1/(2 tau (1 - tau) + 1/2).
    let expect: f64 = 1.0 / (2.0 * 0.3 * 0.7 + 0.5) - 1.0;
    assert!((t.unitarity_defect - expect.abs()).abs() <= 1e-6, "{}", t.unitarity_defect);
}

#[test]
fn wigner_covariance_trivial_cases() {
    let g = grid();
    let f = Signal::standard().sample(&g);
    let c = wigner_covariance_check(&SympMatrix::j(1), 0.5, &f, &f).unwrap();
    assert!(c.residual <= 1e-6, "{}", c.residual);
    let h = Signal::Gaussian { width: 1.2, center: 0.3, freq: -0.4 }.sample(&g);
    let c = wigner_covariance_check(&SympMatrix::minus_identity(1), 0.5, &f, &h).unwrap();
    assert!(c.residual <= 1e-6, "{}", c.residual);
    assert_eq!(c.excluded_fraction, 0.0);
}

#[test]
fn sampler_respects_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = Resolvability::default();
    let ss = sample_resolvable::<f64, _>(&mut rng, 4, &b);
    assert_eq!(ss.len(), 4);
    for s in &ss {
        assert!(b.accepts(s));
        assert!(s.det_minus_identity().abs() >= SAMPLER_DET_TOL);
    }
}

#[test]
fn quadrature_oracles_agree_with_closed_form() {
    let g = grid();
    let j = SympMatrix::j(1);
    let d = Damping::default();
    let r = build_r(&j, 0.5, &g).unwrap();
    for &(a, b) in &[(64usize, 64usize), (70, 60), (50, 80)] {
        let o = composed_kernel_entry(&j, 0.5, g.x(a), g.x(b), d).unwrap();
        assert!(close(o, r.kernel[(a, b)], 1e-6), "{o} vs {}", r.kernel[(a, b)]);
    }
    let s = SympMatrix::from_2x2(1.2, 0.5, -0.3, 0.7083333333333334).unwrap();
    let r = build_r(&s, 0.3, &g).unwrap();
    for &(a, b) in &[(64usize, 66usize), (58, 71)] {
        let o = twisted_kernel_entry(&s, 0.3, g.x(a), g.x(b), d).unwrap();
        assert!(close(o, r.kernel[(a, b)], 1e-6), "{o} vs {}", r.kernel[(a, b)]);
    }
}

#[test]
fn adjudication_prefers_imaginary_unit_at_half() {
    let g = grid();
    let r = build_r(&SympMatrix::j(1), 0.5, &g).unwrap();
    let pairs = [(60usize, 64usize), (64, 70), (55, 52), (70, 61)];
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (g.x(a), g.x(b))).collect();
    let verdict = adjudicate_j_kernel(0.5, &pts, &kernel_at(&r, &pairs));
    assert_eq!(verdict.verdict(1e-5), Some("with i"));
}

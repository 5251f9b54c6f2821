//! Acceptance criteria on the reference configuration. Every check prints one line.

use shubinlab::report::Check;
use shubinlab::verify::{self, Context};

fn run(id: u32, expected_tolerances: &[(&str, f64)]) {
    let (_, title, criterion) = verify::criteria().into_iter().find(|c| c.0 == id).expect("known criterion");
    let checks: Vec<Check> = criterion(&Context::reference());
    assert!(!checks.is_empty(), "criterion {id} produced no checks");
    for c in &checks {
        println!("[{id:>2}] {}", c.line());
    }
    for (prefix, tol) in expected_tolerances {
        let matching: Vec<_> = checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
        assert!(!matching.is_empty(), "no check named {prefix}*");
        for c in matching {
            assert_eq!(c.tolerance, *tol, "{} tolerance", c.name);
        }
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("[{id:>2}] {verdict} criterion {id}: {title} ({} of {} checks pass)", checks.len() - failed.len(), checks.len());
    assert!(failed.is_empty(), "criterion {id} ({title}) failed: {failed:?}");
}

#[test]
fn criterion_01_ordering_theorems() {
    run(1, &[("ordering.", 0.0)]);
}

#[test]
fn criterion_02_heisenberg_laws() {
    run(2, &[("heisenberg.", 1e-12)]);
}

#[test]
fn criterion_03_wigner_marginals() {
    run(3, &[("marginal.", 1e-6)]);
}

#[test]
fn criterion_04_adjoint_law() {
    run(4, &[("opadj.", 1e-8)]);
}

#[test]
fn criterion_05_twisted_composition() {
    run(5, &[("comp1.gaussian", 1e-5), ("comp1.delta", 1e-12)]);
}

#[test]
fn criterion_06_cayley_identities() {
    run(6, &[("cayley.ms", 1e-9), ("cayley.mss", 1e-9), ("cayley.roundtrip", 1e-9), ("cayley.m_of_j", 1e-12)]);
}

#[test]
fn criterion_07_intertwining() {
    run(7, &[("interop1.", 1e-5)]);
}

#[test]
fn criterion_08_inverse_and_adjoint() {
    run(8, &[("rs3.inverse", 1e-5), ("rs3.unitary", 1e-5), ("rs3.non_unitary", 1e-2)]);
}

#[test]
fn criterion_09_quasi_cocycle() {
    run(9, &[("rs2.", 1e-5)]);
}

#[test]
fn criterion_10_wigner_covariance() {
    run(10, &[("wigsymptau.J", 1e-3), ("wigsymptau.S2", 1e-3), ("wigsymptau.-I", 1e-6)]);
}

#[test]
fn criterion_11_born_jordan() {
    run(11, &[("bj.t_bj", 1e-10), ("bj.routes", 1e-5), ("bj.self_adjoint", 1e-8)]);
}

#[test]
fn criterion_12_reduced_covariance() {
    run(12, &[("cobj1.J", 1e-5), ("cobj1.M", 1e-5), ("cobj1.V", 1e-2), ("theta_invariance", 1e-12)]);
}

#[test]
fn criterion_13_fresnel() {
    run(13, &[("fresnel.", 1e-6)]);
}

#[test]
fn criterion_14_kernel_reading() {
    run(14, &[("kernel_reading.", 1e-5)]);
}

use hypeval::hypfun::{EvalPoint, HypContext, Which};
use hypeval::params::{aw_params, c64, lambda_n, reference, GammaSet};
use hypeval::qseries::aw_polynomial_for;
use num_complex::Complex64;
use proptest::prelude::*;

fn ctx() -> HypContext {
    HypContext::new(reference().0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

#[test]
fn reduces_to_constant_and_first_polynomial() {
    let (pair, gamma) = reference();
    let c = ctx();
    let p = aw_params(&gamma, &pair);
    let big_q = p.base;
    let one = c64(1.0, 0.0);
    for x in [c64(0.1, 0.0), c64(-0.4, 0.1)] {
        for which in [Which::R, Which::S] {
            let v0 = c.value(which, &gamma, x, lambda_n(0, &gamma, &pair)).unwrap();
            assert!((v0 - 1.0).norm() < 1e-7, "{which:?} at λ_0: {v0}");
        }
        // r_1 written out from the terminating series.
        let e = (2.0 * std::f64::consts::PI * x / pair.w2).exp();
        let abcd = p.a * p.b * p.c * p.d;
        let r1 = one
            + (one - one / big_q) * (one - abcd) * (one - p.a * e) * (one - p.a / e) * big_q
                / ((one - p.a * p.b) * (one - p.a * p.c) * (one - p.a * p.d) * (one - big_q));
        for which in [Which::R, Which::S] {
            let v1 = c.value(which, &gamma, x, lambda_n(1, &gamma, &pair)).unwrap();
            assert!(rel(v1, r1) < 1e-6, "{which:?} at λ_1: {v1} vs {r1}");
        }
    }
}

#[test]
fn pinched_lambda_is_refused() {
    let (pair, gamma) = reference();
    let near = lambda_n(2, &gamma, &pair) + c64(0.0, 1e-6);
    assert!(ctx().value(Which::S, &gamma, c64(0.1, 0.0), near).is_err());
}

#[test]
fn psi_outside_its_window_is_refused_but_continues() {
    let (_, gamma) = reference();
    let c = ctx();
    let pt = EvalPoint::new(c64(0.1, 1.0), c64(0.12, 0.0));
    assert!(c.psi(&gamma, pt).is_err());
    assert!(c.psi_continued(&gamma, pt).is_ok());
}

#[test]
fn pieces_add_up() {
    let (pair, gamma) = reference();
    let c = ctx();
    let pt = EvalPoint::new(c64(4.0 * pair.w, 0.0), c64(0.1, 0.2));
    let sum: Complex64 = c.psi_pieces(&gamma, pt).unwrap().iter().sum();
    assert!(rel(sum, c.psi(&gamma, pt).unwrap().value) < 1e-8);
}

#[test]
fn decay_rate_of_s() {
    let (_, gamma) = reference();
    let fit = ctx().growth_estimate(Which::S, &gamma, c64(0.1, 0.2)).unwrap();
    assert!(fit.relative_error() < 0.05, "{fit:?}");
}

#[test]
fn difference_equations_hold() {
    use hypeval::gamma::Step;
    use hypeval::qseries::Side;
    let (_, gamma) = reference();
    let c = ctx();
    let pt = EvalPoint::new(c64(0.08, 0.0), c64(0.11, 0.0));
    for which in [Which::R, Which::S] {
        for step in [Step::W1, Step::W2] {
            for side in [Side::X, Side::Lambda] {
                let r = c.aw_residual(which, step, side, &gamma, pt).unwrap();
                assert!(r < 1e-6, "{which:?} {step:?} {side:?}: {r}");
            }
        }
    }
}

fn window() -> impl Strategy<Value = EvalPoint> {
    (-0.15f64..0.15, -0.15f64..0.15).prop_map(|(x, l)| EvalPoint::new(c64(x, 0.0), c64(l, 0.0)))
}

fn small_gamma() -> impl Strategy<Value = GammaSet> {
    prop::array::uniform4(0.0f64..0.06).prop_map(GammaSet::real)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn r_equals_s(pt in window(), gamma in small_gamma()) {
        prop_assert!(ctx().verify_r_equals_s(&gamma, pt).unwrap() < 1e-6);
    }

    #[test]
    fn s_duality(pt in window(), gamma in small_gamma()) {
        let c = ctx();
        let a = c.value(Which::S, &gamma, pt.x, pt.lambda).unwrap();
        let b = c.value(Which::S, &gamma.dual(), pt.lambda, pt.x).unwrap();
        prop_assert!(rel(a, b) < 1e-7);
    }

    #[test]
    fn psi_is_invariant_under_sign_flips(pt in window(), gamma in small_gamma(), mask in 1u8..16) {
        let c = ctx();
        let a = c.psi(&gamma, pt).unwrap().value;
        let b = c.psi(&gamma.flip_rstu(mask), pt).unwrap().value;
        prop_assert!(rel(a, b) < 1e-7);
    }

    #[test]
    fn s_is_modular(pt in window(), gamma in small_gamma()) {
        let c = ctx();
        let a = c.value(Which::S, &gamma, pt.x, pt.lambda).unwrap();
        let b = c.swapped().value(Which::S, &gamma, pt.x, pt.lambda).unwrap();
        prop_assert!(rel(a, b) < 1e-7);
    }
}

#[test]
fn polynomial_helper_matches_reduction() {
    let (pair, gamma) = reference();
    let x = c64(0.3, 0.0);
    let want = aw_polynomial_for(2, &gamma, &pair, x).unwrap();
    let got = ctx().value(Which::S, &gamma, x, lambda_n(2, &gamma, &pair)).unwrap();
    assert!(rel(got, want) < 1e-6);
}

use std::sync::Arc;

use hypeval::gamma::HypGammaContext;
use hypeval::params::{c64, ModulusPair, I};
use hypeval::repr::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn pair() -> ModulusPair {
    ModulusPair::new(1.0, 2f64.sqrt()).unwrap()
}

fn probe(c: Complex64) -> impl Fn(Complex64) -> hypeval::error::Result<Complex64> + Copy {
    move |z: Complex64| Ok((-(z - c) * (z - c)).exp())
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn cplx(r: f64, i: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -i..i).prop_map(|(a, b)| c64(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantum_group_relations(lam in cplx(0.5, 0.2), z in cplx(1.0, 0.3), c in cplx(0.5, 0.2)) {
        let p = pair();
        let g = |x| pi_lambda(x, lam, &p);
        let f = probe(c);
        let (k, ki, e, ff) = (g(Generator::K), g(Generator::KInv), g(Generator::E), g(Generator::F));
        let q = p.q;
        let lhs = k.compose(&e).apply(f, z).unwrap();
        prop_assert!(rel(lhs, e.compose(&k).scale(q * q).apply(f, z).unwrap()) < 1e-9);
        let lhs = k.compose(&ff).apply(f, z).unwrap();
        prop_assert!(rel(lhs, ff.compose(&k).scale(1.0 / (q * q)).apply(f, z).unwrap()) < 1e-9);
        let lhs = e.compose(&ff).sub(&ff.compose(&e)).apply(f, z).unwrap();
        let rhs = k.sub(&ki).scale(1.0 / (q - 1.0 / q)).apply(f, z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-8);
        prop_assert!(rel(k.compose(&ki).apply(f, z).unwrap(), f(z).unwrap()) < 1e-12);
    }

    #[test]
    fn casimir_acts_by_a_scalar(lam in cplx(0.5, 0.2), z in cplx(1.0, 0.3), c in cplx(0.5, 0.2)) {
        let p = pair();
        let f = probe(c);
        let got = casimir(lam, &p).apply(f, z).unwrap();
        prop_assert!(rel(got, casimir_scalar(lam, &p) * f(z).unwrap()) < 1e-8);
    }

    #[test]
    fn shifts_compose_additively(a in cplx(1.0, 1.0), b in cplx(1.0, 1.0), z in cplx(1.0, 0.3)) {
        let f = probe(c64(0.1, 0.0));
        let lhs = shift_op(a).compose(&shift_op(b)).apply(f, z).unwrap();
        prop_assert!(rel(lhs, f(z + a + b).unwrap()) < 1e-12);
    }
}

#[test]
fn h_is_an_eigenfunction() {
    let p = pair();
    let ctx = Arc::new(HypGammaContext::new(p));
    let (tau, rho, lam) = (c64(0.11, 0.02), c64(0.07, -0.01), c64(0.3, 0.1));
    let h = h_eigenfunction(&ctx, tau, rho, lam);
    let y = twisted_primitive(rho, lam, &p, Twist::Plain);
    let m = mu(tau, rho, &p);
    for z in [c64(0.2, 0.1), c64(-1.0, -0.2), c64(1.5, 0.0)] {
        let lhs = y.apply(|u| h.eval(u), z).unwrap();
        let scale = y.magnitude(|u| h.eval(u), z).unwrap();
        assert!((lhs - m * h.eval(z).unwrap()).norm() < 1e-9 * scale);
    }
}

#[test]
fn first_order_equation_of_h() {
    let p = pair();
    let ctx = Arc::new(HypGammaContext::new(p));
    let (tau, rho, lam) = (c64(0.11, 0.02), c64(0.07, -0.01), c64(0.3, 0.1));
    let h = h_eigenfunction(&ctx, tau, rho, lam);
    let s = 0.5 * I * p.w1;
    for z in [c64(0.4, 0.0), c64(-0.8, 0.1)] {
        let ratio = h.eval(z + s).unwrap() / h.eval(z - s).unwrap();
        assert!(rel(ratio, first_order_ratio(tau, rho, lam, &p, z)) < 1e-10);
    }
}

#[test]
fn generators_parse() {
    let cases = [
        ("K", Generator::K),
        ("Kinv", Generator::KInv),
        ("E", Generator::E),
        ("F", Generator::F),
        ("Kt", Generator::KTilde),
        ("Ktinv", Generator::KTildeInv),
        ("Et", Generator::ETilde),
        ("Ft", Generator::FTilde),
    ];
    for (s, g) in cases {
        assert_eq!(Generator::parse(s).unwrap(), g);
    }
    assert!(Generator::parse("nonsense").is_err());
}

use std::f64::consts::PI;

use hypeval::handle::FunctionHandle;
use hypeval::params::{c64, I};
use hypeval::quad::*;
use proptest::prelude::*;

#[test]
fn gaussian_on_the_real_line() {
    let f = FunctionHandle::entire(|z| (-z * z).exp(), -1.0);
    let r = integrate_line(&f, &QuadratureSpec::default()).unwrap();
    assert!((r.value - PI.sqrt()).norm() < 1e-12, "{}", r.value);
}

#[test]
fn sech_is_shift_invariant_inside_its_strip() {
    // ∫ sech(πz) dz = 1 along any horizontal line with |Im z| < 1/2.
    let f = FunctionHandle::entire(|z| 1.0 / (PI * z).cosh(), -PI);
    let c = Contour::new(vec![c64(-20.0, 0.0), c64(-19.0, 0.3), c64(19.0, 0.3), c64(20.0, 0.0)]).unwrap();
    let r = integrate_contour(&f, &c, &QuadratureSpec::default()).unwrap();
    assert!((r.value - 1.0).norm() < 1e-12, "{}", r.value);
}

#[test]
fn residue_of_a_simple_pole() {
    let center = c64(0.2, -0.4);
    let res = residue_by_contour(|z| Ok((z * z).exp() / (z - center)), center, 0.3, &QuadratureSpec::default()).unwrap();
    assert!((res - (center * center).exp()).norm() < 1e-12);
}

#[test]
fn crossing_sequences_are_rejected() {
    // An ascending sequence directly below a descending one interlocks.
    let desc = [PoleSequence::descending(c64(0.0, 3.0), 1.0, 2f64.sqrt())];
    let asc = [PoleSequence::ascending(c64(0.0, -3.0), 1.0, 2f64.sqrt())];
    assert!(build_indented_contour(&desc, &asc, 10.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn indented_contour_separates(
        d in prop::collection::vec((-2.0f64..2.0, -0.8f64..0.8), 1..4),
        a in prop::collection::vec((-2.0f64..2.0, -0.8f64..0.8), 1..4),
    ) {
        let (w1, w2) = (1.0, 2f64.sqrt());
        let w = 0.5 * (w1 + w2);
        // Descending sequences with extremes at (x, y), ascending ones with
        // extremes at (x', y'); skip configurations where an ascending
        // extreme sits at or below a descending one in the same column.
        for &(xd, yd) in &d {
            for &(xa, ya) in &a {
                prop_assume!((xd - xa).abs() > 0.2 || ya > yd + 0.2);
            }
        }
        let desc: Vec<_> = d.iter().map(|&(x, y)| PoleSequence::descending(c64(x, y + w), w1, w2)).collect();
        let asc: Vec<_> = a.iter().map(|&(x, y)| PoleSequence::ascending(c64(x, y - w), w1, w2)).collect();
        let c = build_indented_contour(&desc, &asc, 10.0).unwrap();
        prop_assert!(separates(&c, &desc, &asc, 20));
    }

    #[test]
    fn pole_sequences_step_by_the_lattice(x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let s = PoleSequence::descending(c64(x, y), 1.0, 2f64.sqrt());
        let e = s.extreme();
        prop_assert!((e - c64(x, y) + I * 0.5 * (1.0 + 2f64.sqrt())).norm() < 1e-14);
        for p in s.first(6) {
            prop_assert!(p.im <= e.im + 1e-12);
        }
    }
}

#[test]
fn tail_bound_is_positive_and_decreasing() {
    let a = tail_bound(1.0, 1.0, 5.0).unwrap();
    let b = tail_bound(1.0, 1.0, 10.0).unwrap();
    assert!(a > b && b > 0.0);
    assert!(tail_bound(-1.0, 1.0, 5.0).is_err());
}

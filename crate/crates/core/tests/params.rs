use approx::assert_relative_eq;
use hypeval::params::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c64(a, b))
}

fn gamma_set() -> impl Strategy<Value = GammaSet> {
    prop::array::uniform4(cplx()).prop_map(GammaSet::new)
}

fn close(a: &GammaSet, b: &GammaSet) -> bool {
    a.g.iter().zip(&b.g).all(|(x, y)| (x - y).norm() < 1e-14)
}

proptest! {
    #[test]
    fn dual_is_an_involution(g in gamma_set()) {
        prop_assert!(close(&g.dual().dual(), &g));
    }

    #[test]
    fn chart_round_trip(g in gamma_set()) {
        let [r, s, t, u] = g.rstu();
        prop_assert!(close(&gamma_from_rstu(r, s, t, u), &g));
    }

    #[test]
    fn check_is_an_involution(g in gamma_set()) {
        prop_assert!(close(&g.check().check(), &g));
    }

    #[test]
    fn sign_flips_compose_by_xor(g in gamma_set(), a in 0u8..16, b in 0u8..16) {
        prop_assert!(close(&g.flip_rstu(a).flip_rstu(b), &g.flip_rstu(a ^ b)));
    }

    #[test]
    fn dual_preserves_ghat0_up_to_gamma0(g in gamma_set()) {
        // The Hadamard transform sends γ̂0 to γ0 and γ0 to γ̂0.
        prop_assert!((g.dual().g[0] - g.ghat0()).norm() < 1e-14);
        prop_assert!((g.dual().ghat0() - g.g[0]).norm() < 1e-14);
    }

    #[test]
    fn param_set_json_round_trip(w1 in 0.5f64..2.0, g in gamma_set()) {
        let w2 = w1 * std::f64::consts::SQRT_2;
        let pair = ModulusPair::new(w1, w2).unwrap();
        let ps = ParamSet::new(&pair, &g);
        let back: ParamSet = serde_json::from_str(&serde_json::to_string(&ps).unwrap()).unwrap();
        prop_assert_eq!(back, ps);
    }

    #[test]
    fn lambda_n_spacing_is_iw1(g in gamma_set(), n in 0u32..10) {
        let pair = ModulusPair::new(1.0, std::f64::consts::SQRT_2).unwrap();
        let d = lambda_n(n + 1, &g, &pair) - lambda_n(n, &g, &pair);
        prop_assert!((d - c64(0.0, pair.w1)).norm() < 1e-12);
    }
}

#[test]
fn check_in_components() {
    let g = GammaSet::real([0.1, 0.2, 0.3, 0.4]);
    let c = g.check();
    for (got, want) in c.g.iter().zip([0.4, -0.3, -0.2, 0.1]) {
        assert_relative_eq!(got.re, want, epsilon = 1e-15);
    }
}

#[test]
fn modulus_pair_validation() {
    assert!(ModulusPair::new(1.0, 2f64.sqrt()).is_ok());
    assert!(ModulusPair::new(-1.0, 1.0).is_err());
    assert!(ModulusPair::new(1.0, 0.0).is_err());
    assert!(ModulusPair::new(1.0, 1.0).unwrap().require_generic().is_err());
    let near = ModulusPair::new(1.0, 1.5).unwrap();
    assert!(near.near_resonance && near.require_generic().is_ok());
    let p = ModulusPair::new(1.0, 2f64.sqrt()).unwrap();
    assert_relative_eq!(p.w, 0.5 * (1.0 + 2f64.sqrt()), epsilon = 1e-15);
    assert_relative_eq!(p.q.norm(), 1.0, epsilon = 1e-15);
}

#[test]
fn parse_complex_forms() {
    assert_eq!(parse_complex("1.5").unwrap(), c64(1.5, 0.0));
    assert_eq!(parse_complex(" -2, 0.25 ").unwrap(), c64(-2.0, 0.25));
    assert!(parse_complex("a,b").is_err());
    assert!(parse_complex("1,2,3").is_err());
}

//! q-Pochhammer symbols, terminating ₄φ₃ series, Askey-Wilson polynomials,
//! the Askey-Wilson second order operator and the constants built from `G`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{HypGammaContext, Step};
use crate::params::{aw_params, lambda_n, AWParams, GammaSet, ModulusPair, I};

const VANISH: f64 = 1e-13;

pub fn q_pochhammer(a: Complex64, q: Complex64, n: u32) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        p *= 1.0 - a * qk;
        qk *= q;
    }
    p
}

pub fn q_pochhammer_multi(a: &[Complex64], q: Complex64, n: u32) -> Complex64 {
    a.iter().map(|&x| q_pochhammer(x, q, n)).product()
}

/// `₄φ₃(a; b; q, z)` truncated after the `k = n` term. The caller guarantees
/// that one of the `a_j` equals `q^{-n}`.
pub fn phi43_terminating(a: [Complex64; 4], b: [Complex64; 3], q: Complex64, z: Complex64, n: u32) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut qk = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let num: Complex64 = a.iter().map(|&x| 1.0 - x * qk).product();
        let mut den: Complex64 = b.iter().map(|&x| 1.0 - x * qk).product();
        den *= 1.0 - qk * q;
        if den.norm() < VANISH {
            return Err(Error::Pole {
                z: Complex64::new(k as f64 + 1.0, 0.0),
                pole: den,
                distance: den.norm(),
            });
        }
        term *= num / den * z;
        sum += term;
        qk *= q;
    }
    Ok(sum)
}

/// `r_n(x; a, b, c, d | q²)`.
pub fn aw_polynomial(n: u32, x: Complex64, p: &AWParams, pair: &ModulusPair) -> Result<Complex64> {
    let base = p.base;
    let e = (2.0 * PI * x / pair.w2).exp();
    let abcd = p.a * p.b * p.c * p.d;
    let top = [
        base.powi(-(n as i32)),
        abcd * base.powi(n as i32 - 1),
        p.a * e,
        p.a / e,
    ];
    let bottom = [p.a * p.b, p.a * p.c, p.a * p.d];
    phi43_terminating(top, bottom, base, base, n)
}

/// `A(w1, w2, γ; x)` in product form.
pub fn coeff_a(pair: &ModulusPair, gamma: &GammaSet, x: Complex64) -> Result<Complex64> {
    let w2 = pair.w2;
    let d1 = 1.0 - (4.0 * PI * x / w2).exp();
    let d2 = 1.0 - (4.0 * PI * (x + I * pair.w) / w2).exp();
    if d1.norm() < VANISH || d2.norm() < VANISH {
        return Err(Error::Pole {
            z: x,
            pole: x,
            distance: d1.norm().min(d2.norm()),
        });
    }
    let num: Complex64 = gamma
        .g
        .iter()
        .map(|&g| 1.0 - (2.0 * PI * (I * pair.w + I * g + x) / w2).exp())
        .product();
    Ok(num / (d1 * d2))
}

/// `A(w1, w2, γ; x)` in sinh/cosh form. Expanding the product form gives an
/// overall factor 4 in front of the exponential prefactor.
pub fn coeff_a_sinh(pair: &ModulusPair, gamma: &GammaSet, x: Complex64) -> Result<Complex64> {
    let w2 = pair.w2;
    let den = (2.0 * PI * x / w2).sinh() * (2.0 * PI * (x + I * pair.w) / w2).sinh();
    if den.norm() < VANISH {
        return Err(Error::Pole { z: x, pole: x, distance: den.norm() });
    }
    let pref = (I * PI * pair.w1 / w2 + 2.0 * PI * I * gamma.ghat0() / w2).exp();
    let prod: Complex64 = gamma
        .g
        .iter()
        .map(|&g| (PI / w2 * (x + 0.5 * I * pair.w1 + I * g)).cosh())
        .product();
    Ok(-4.0 * pref * prod / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AWOperatorSpec {
    pub gamma: GammaSet,
    pub pair: ModulusPair,
    pub step: Step,
}

impl AWOperatorSpec {
    fn oriented(&self) -> ModulusPair {
        match self.step {
            Step::W1 => self.pair,
            Step::W2 => self.pair.swap(),
        }
    }

    /// Eigenvalue belonging to spectral value `lambda`.
    pub fn eigenvalue(&self, lambda: Complex64) -> Complex64 {
        let p = self.oriented();
        eigenvalue_v(p.w1, p.w2, &self.gamma, lambda)
    }
}

/// `𝓛_γ^x f` (step `iw1`) or its twin with `w1 ↔ w2` (step `iw2`).
pub fn apply_aw<F>(spec: &AWOperatorSpec, f: F, x: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let p = spec.oriented();
    let h = I * p.w1;
    let f0 = f(x)?;
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    Ok(coeff_a(&p, &spec.gamma, x)? * (fp - f0) + coeff_a(&p, &spec.gamma, -x)? * (fm - f0))
}

/// `v(wa, wb, γ; λ)`.
pub fn eigenvalue_v(wa: f64, wb: f64, gamma: &GammaSet, lambda: Complex64) -> Complex64 {
    let t = I * PI * wa / wb + 2.0 * PI * I * gamma.ghat0() / wb;
    -2.0 * t.exp() * ((2.0 * PI * lambda / wb).cosh() + t.cosh())
}

/// `r_n` for the parameters attached to `γ`, with its eigenvalue `v(λ_n)`.
pub fn aw_polynomial_for(n: u32, gamma: &GammaSet, pair: &ModulusPair, x: Complex64) -> Result<Complex64> {
    aw_polynomial(n, x, &aw_params(gamma, pair), pair)
}

pub fn aw_eigen_residual(n: u32, gamma: &GammaSet, pair: &ModulusPair, x: Complex64) -> Result<(Complex64, Complex64)> {
    let spec = AWOperatorSpec {
        gamma: *gamma,
        pair: *pair,
        step: Step::W1,
    };
    let lhs = apply_aw(&spec, |y| aw_polynomial_for(n, gamma, pair, y), x)?;
    let v = spec.eigenvalue(lambda_n(n, gamma, pair));
    Ok((lhs, v * aw_polynomial_for(n, gamma, pair, x)?))
}

/// `c(γ; y) = Π_j G(y − iγ_j) / G(2y + iw)`.
pub fn c_function(ctx: &HypGammaContext, gamma: &GammaSet, y: Complex64) -> Result<Complex64> {
    let mut p = ctx.recip(2.0 * y + I * ctx.pair.w)?;
    for g in gamma.g {
        p *= ctx.g(y - I * g)?;
    }
    Ok(p)
}

/// `N(γ) = Π_{j=1..3} G(iγ0 + iγ_j + iw)`.
pub fn normalization_n(ctx: &HypGammaContext, gamma: &GammaSet) -> Result<Complex64> {
    let mut p = Complex64::new(1.0, 0.0);
    for j in 1..4 {
        p *= ctx.g(I * (gamma.g[0] + gamma.g[j] + ctx.pair.w))?;
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    X,
    Lambda,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{c64, make_modulus_pair, reference};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn pochhammer_examples() {
        let q = c64(0.3, 0.8);
        assert_eq!(q_pochhammer(c64(2.0, 1.0), q, 0), c64(1.0, 0.0));
        assert!(close(q_pochhammer(I, I, 2), c64(2.0, -2.0), 1e-15));
        let a = c64(-0.7, 0.2);
        let lhs = q_pochhammer(a, q, 5);
        let rhs = q_pochhammer(a, q, 4) * (1.0 - a * q.powi(4));
        assert!(close(lhs, rhs, 1e-15));
    }

    #[test]
    fn phi43_examples() {
        let q = Complex64::from_polar(1.0, 0.9);
        let b = [c64(0.2, 0.1), c64(-0.3, 0.5), c64(0.7, -0.2)];
        let z = c64(0.4, 0.3);
        let a0 = [c64(1.0, 0.0), c64(0.5, 0.5), c64(0.1, 0.2), c64(-0.4, 0.0)];
        assert_eq!(phi43_terminating(a0, b, q, z, 0).unwrap(), c64(1.0, 0.0));

        let a1 = [q.inv(), c64(0.5, 0.5), c64(0.1, 0.2), c64(-0.4, 0.0)];
        let direct = 1.0
            + a1.iter().map(|x| 1.0 - x).product::<Complex64>()
                / (b.iter().map(|x| 1.0 - x).product::<Complex64>() * (1.0 - q))
                * z;
        assert!(close(phi43_terminating(a1, b, q, z, 1).unwrap(), direct, 1e-14));

        let a3 = [q.powi(-3), c64(0.5, 0.5), c64(0.1, 0.2), c64(-0.4, 0.0)];
        let p = phi43_terminating(a3, b, q, z, 3).unwrap();
        let perm = [a3[2], a3[0], a3[3], a3[1]];
        assert!(close(phi43_terminating(perm, b, q, z, 3).unwrap(), p, 1e-13));
        assert!(close(phi43_terminating(a3, b, q, z, 6).unwrap(), p, 1e-13));
    }

    #[test]
    fn polynomial_basics() {
        let (pair, g) = reference();
        let aw = aw_params(&g, &pair);
        assert_eq!(aw_polynomial(0, c64(0.3, 0.1), &aw, &pair).unwrap(), c64(1.0, 0.0));
        for n in 1..4 {
            let x = c64(0.37, 0.11);
            assert!(close(aw_polynomial(n, x, &aw, &pair).unwrap(), aw_polynomial(n, -x, &aw, &pair).unwrap(), 1e-12));
        }
    }

    #[test]
    fn eigen_equation() {
        let (pair, g) = reference();
        for n in 0..5 {
            for x in [c64(0.2, 0.05), c64(-0.7, 0.1), c64(1.3, -0.2)] {
                let (l, r) = aw_eigen_residual(n, &g, &pair, x).unwrap();
                assert!((l - r).norm() < 1e-9 * (1.0 + r.norm()), "n={n} {l} {r}");
            }
        }
    }

    #[test]
    fn a_forms_agree() {
        let (pair, g) = reference();
        for x in [c64(0.3, 0.2), c64(-1.1, 0.4), c64(0.05, -0.3)] {
            assert!(close(coeff_a(&pair, &g, x).unwrap(), coeff_a_sinh(&pair, &g, x).unwrap(), 1e-12));
        }
    }

    #[test]
    fn a_zero_and_period() {
        // With γ = 0 all four numerator factors vanish at x = −iw while the
        // denominator has a simple zero, so A vanishes to third order there.
        let pair = make_modulus_pair(1.0, 2f64.sqrt()).unwrap();
        let x0 = -I * pair.w;
        let a1 = coeff_a(&pair, &GammaSet::zero(), x0 + c64(1e-3, 0.0)).unwrap();
        let a2 = coeff_a(&pair, &GammaSet::zero(), x0 + c64(2e-3, 0.0)).unwrap();
        assert!(a1.norm() < 1e-5);
        assert!(((a2 / a1).norm() - 8.0).abs() < 0.1);

        let g = GammaSet::real([0.1, 0.05, 0.02, 0.03]);
        // γ0, γ1 ↦ γ0 + w2, γ1 + w2 moves γ̂0 by w2.
        let shifted = GammaSet::new([g.g[0] + pair.w2, g.g[1] + pair.w2, g.g[2], g.g[3]]);
        assert!((shifted.ghat0() - g.ghat0() - pair.w2).norm() < 1e-15);
        let x = c64(0.4, 0.1);
        assert!(close(coeff_a_sinh(&pair, &g, x).unwrap(), coeff_a_sinh(&pair, &shifted, x).unwrap(), 1e-12));
    }

    #[test]
    fn operator_on_constants_and_linearity() {
        let (pair, g) = reference();
        let spec = AWOperatorSpec { gamma: g, pair, step: Step::W1 };
        let x = c64(0.3, 0.1);
        assert!(apply_aw(&spec, |_| Ok(c64(2.5, -1.0)), x).unwrap().norm() < 1e-13);
        let f = |y: Complex64| Ok(y.cosh());
        let h = |y: Complex64| Ok((0.3 * y).sin());
        let comb = apply_aw(&spec, |y| Ok(2.0 * f(y)? - I * h(y)?), x).unwrap();
        let sep = 2.0 * apply_aw(&spec, f, x).unwrap() - I * apply_aw(&spec, h, x).unwrap();
        assert!(close(comb, sep, 1e-13));
    }

    #[test]
    fn eigenvalue_properties() {
        let (pair, g) = reference();
        let l = c64(0.3, 0.2);
        assert!(close(eigenvalue_v(pair.w1, pair.w2, &g, l), eigenvalue_v(pair.w1, pair.w2, &g, -l), 1e-14));
        assert!(eigenvalue_v(pair.w1, pair.w2, &g, lambda_n(0, &g, &pair)).norm() < 1e-13);
    }

    #[test]
    fn c_and_n() {
        let (pair, g) = reference();
        let ctx = HypGammaContext::new(pair);
        let y = c64(0.3, 0.1);
        let c0 = c_function(&ctx, &GammaSet::zero(), y).unwrap();
        let want = ctx.g(y).unwrap().powi(4) / ctx.g(2.0 * y + I * pair.w).unwrap();
        assert!(close(c0, want, 1e-13));
        let p = g.permute([0, 3, 1, 2]);
        assert!(close(c_function(&ctx, &g, y).unwrap(), c_function(&ctx, &p, y).unwrap(), 1e-13));
        assert!(close(normalization_n(&ctx, &g).unwrap(), normalization_n(&ctx, &p).unwrap(), 1e-13));
        assert!(close(normalization_n(&ctx, &g).unwrap(), normalization_n(&ctx, &g.dual()).unwrap(), 1e-12));
    }
}

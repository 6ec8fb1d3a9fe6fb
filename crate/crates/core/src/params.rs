//! Parameter sets: the modulus pair, the four couplings and their charts,
//! Askey-Wilson parameters and the validity windows used by the identity checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The two step scales `(w1, w2)` with their derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusPair {
    pub w1: f64,
    pub w2: f64,
    pub w: f64,
    pub v: f64,
    pub q: Complex64,
    pub qtilde: Complex64,
    pub alpha: f64,
    /// `w1/w2` or `w2/w1` is an exact integer.
    pub integer_ratio: bool,
    /// `w1/w2` lies within 1e-6 of a rational with denominator at most 8.
    pub near_resonance: bool,
}

pub fn make_modulus_pair(w1: f64, w2: f64) -> Result<ModulusPair> {
    if !(w1.is_finite() && w2.is_finite()) || w1 <= 0.0 || w2 <= 0.0 {
        return Err(Error::Domain(format!(
            "step scales must be positive, got ({w1}, {w2})"
        )));
    }
    let r12 = w1 / w2;
    let r21 = w2 / w1;
    let integer_ratio = r12.fract() == 0.0 || r21.fract() == 0.0;
    let near_resonance = (1..=8u32).any(|den| {
        let d = den as f64;
        let p = (r12 * d).round();
        (1.0..=8.0).contains(&p) && (r12 - p / d).abs() < 1e-6
    });
    Ok(ModulusPair {
        w1,
        w2,
        w: 0.5 * (w1 + w2),
        v: 0.5 * (w1 - w2),
        q: Complex64::from_polar(1.0, PI * w1 / w2),
        qtilde: Complex64::from_polar(1.0, PI * w2 / w1),
        alpha: 2.0 * PI / (w1 * w2),
        integer_ratio,
        near_resonance,
    })
}

impl ModulusPair {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        make_modulus_pair(w1, w2)
    }

    pub fn swap(&self) -> ModulusPair {
        make_modulus_pair(self.w2, self.w1).expect("swap of a valid pair")
    }

    /// `q^beta = exp(beta * pi i w1/w2)`.
    pub fn q_pow(&self, beta: Complex64) -> Complex64 {
        (beta * I * PI * self.w1 / self.w2).exp()
    }

    pub fn sqrt_w1w2(&self) -> f64 {
        (self.w1 * self.w2).sqrt()
    }

    /// Error unless the pair is generic enough for the identity suites.
    pub fn require_generic(&self) -> Result<()> {
        if self.integer_ratio {
            return Err(Error::Domain(format!(
                "integer step ratio ({}, {}) makes the pole lattice degenerate",
                self.w1, self.w2
            )));
        }
        Ok(())
    }
}

/// The couplings `γ0..γ3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    pub g: [Complex64; 4],
}

const HADAMARD: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

impl GammaSet {
    pub fn new(g: [Complex64; 4]) -> Self {
        GammaSet { g }
    }

    pub fn real(g: [f64; 4]) -> Self {
        GammaSet {
            g: g.map(|v| c64(v, 0.0)),
        }
    }

    pub fn zero() -> Self {
        GammaSet::real([0.0; 4])
    }

    pub fn rho(&self) -> Complex64 {
        0.5 * (self.g[1] - self.g[0])
    }
    pub fn sigma(&self) -> Complex64 {
        0.5 * (self.g[0] + self.g[1])
    }
    pub fn tau(&self) -> Complex64 {
        0.5 * (self.g[3] - self.g[2])
    }
    pub fn upsilon(&self) -> Complex64 {
        -0.5 * (self.g[2] + self.g[3])
    }

    /// `(ρ, σ, τ, υ)`.
    pub fn rstu(&self) -> [Complex64; 4] {
        [self.rho(), self.sigma(), self.tau(), self.upsilon()]
    }

    pub fn dual(&self) -> GammaSet {
        dual_gamma(self)
    }

    pub fn ghat0(&self) -> Complex64 {
        0.5 * (self.g[0] + self.g[1] + self.g[2] + self.g[3])
    }

    /// Flip the signs of the chart coordinates selected by `mask`
    /// (bit 0 = ρ, bit 1 = σ, bit 2 = τ, bit 3 = υ).
    pub fn flip_rstu(&self, mask: u8) -> GammaSet {
        let mut r = self.rstu();
        for (k, v) in r.iter_mut().enumerate() {
            if mask & (1 << k) != 0 {
                *v = -*v;
            }
        }
        gamma_from_rstu(r[0], r[1], r[2], r[3])
    }

    /// `γ̌`, the set with chart `(υ, τ, σ, ρ)`, for which
    /// `ψ(γ; x, λ) = ψ(γ̌; −x, −λ)`. In components `(γ3, −γ2, −γ1, γ0)`.
    pub fn check(&self) -> GammaSet {
        let [r, s, t, u] = self.rstu();
        gamma_from_rstu(u, t, s, r)
    }

    pub fn permute(&self, p: [usize; 4]) -> GammaSet {
        GammaSet {
            g: [self.g[p[0]], self.g[p[1]], self.g[p[2]], self.g[p[3]]],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn dual_gamma(gamma: &GammaSet) -> GammaSet {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, row) in HADAMARD.iter().enumerate() {
        out[i] = 0.5 * row.iter().zip(&gamma.g).map(|(h, g)| h * g).sum::<Complex64>();
    }
    GammaSet { g: out }
}

pub fn gamma_from_rstu(
    rho: Complex64,
    sigma: Complex64,
    tau: Complex64,
    upsilon: Complex64,
) -> GammaSet {
    GammaSet {
        g: [-rho + sigma, rho + sigma, -tau - upsilon, tau - upsilon],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AWParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub base: Complex64,
}

impl AWParams {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

pub fn aw_params(gamma: &GammaSet, pair: &ModulusPair) -> AWParams {
    let f = |g: Complex64| -(2.0 * PI * I * g / pair.w2).exp() * pair.q;
    AWParams {
        a: f(gamma.g[0]),
        b: f(gamma.g[1]),
        c: f(gamma.g[2]),
        d: f(gamma.g[3]),
        base: pair.q * pair.q,
    }
}

pub fn lambda_n(n: u32, gamma: &GammaSet, pair: &ModulusPair) -> Complex64 {
    I * (pair.w + gamma.ghat0() + n as f64 * pair.w1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainReport {
    pub xi: f64,
    pub zeta: f64,
    /// The ψ integral over the real line converges and is pole free.
    pub psi_valid: bool,
    /// `Re γ_j > 0` and `|x|, |λ|, |γ_j| < w/6`.
    pub corollary_window: bool,
    /// `λ` is not real and `ζ > 0`.
    pub asymptotics_window: bool,
}

pub fn domain_report(
    gamma: &GammaSet,
    lambda: Complex64,
    x: Complex64,
    pair: &ModulusPair,
) -> DomainReport {
    let xi = gamma.rstu().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let zeta = pair.w / 2.0 - xi - (lambda.im / 2.0).abs();
    let lim = pair.w / 6.0;
    let corollary_window = gamma.g.iter().all(|g| g.re > 0.0 && g.norm() < lim)
        && x.norm() < lim
        && lambda.norm() < lim;
    DomainReport {
        xi,
        zeta,
        psi_valid: zeta > 0.0 && x.im.abs() < zeta,
        corollary_window,
        asymptotics_window: lambda.im != 0.0 && zeta > 0.0,
    }
}

/// JSON form of a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// `{ "w1": f, "w2": f, "gamma": [{"re": f, "im": f} x 4] }`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub w1: f64,
    pub w2: f64,
    pub gamma: [ComplexJson; 4],
}

impl ParamSet {
    pub fn new(pair: &ModulusPair, gamma: &GammaSet) -> Self {
        ParamSet {
            w1: pair.w1,
            w2: pair.w2,
            gamma: gamma.g.map(ComplexJson::from),
        }
    }

    pub fn pair(&self) -> Result<ModulusPair> {
        make_modulus_pair(self.w1, self.w2)
    }

    pub fn gamma(&self) -> GammaSet {
        GammaSet {
            g: self.gamma.map(Complex64::from),
        }
    }
}

/// Parse `"re,im"` or `"re"` into a complex number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let mut parts = s.split(',').map(str::trim);
    let bad = || Error::Config(format!("cannot parse complex number from {s:?}"));
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// The reference configuration: `(1, √2)`, `γ = (0.05, 0.04, 0.03, 0.02)`.
pub fn reference() -> (ModulusPair, GammaSet) {
    (
        make_modulus_pair(1.0, std::f64::consts::SQRT_2).unwrap(),
        GammaSet::real([0.05, 0.04, 0.03, 0.02]),
    )
}

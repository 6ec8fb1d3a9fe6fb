//! The principal series `π_λ` of the modular double realised as analytic
//! difference operators, the twisted-primitive eigenfunctions `H`, `F` and the
//! radial-part coefficients.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::HypGammaContext;
use crate::handle::FunctionHandle;
use crate::params::{GammaSet, ModulusPair, I};
use crate::qseries::coeff_a;
use crate::quad::{integrate_line, IntegralResult, PoleSequence, QuadratureSpec};

const MERGE: f64 = 1e-13;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MERGE * (1.0 + a.norm().max(b.norm()))
}

/// `Σ c_k e^{β_k z}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpSum {
    /// Pairs `(β, c)`.
    pub terms: Vec<(Complex64, Complex64)>,
}

impl ExpSum {
    pub fn constant(c: Complex64) -> Self {
        ExpSum { terms: vec![(Complex64::new(0.0, 0.0), c)] }
    }

    pub fn exp(beta: Complex64, c: Complex64) -> Self {
        ExpSum { terms: vec![(beta, c)] }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(b, c)| c * (b * z).exp()).sum()
    }

    fn push(&mut self, beta: Complex64, c: Complex64) {
        match self.terms.iter_mut().find(|t| close(t.0, beta)) {
            Some(t) => t.1 += c,
            None => self.terms.push((beta, c)),
        }
    }

    fn add(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        for &(b, c) in &other.terms {
            out.push(b, c);
        }
        out
    }

    fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::default();
        for &(b1, c1) in &self.terms {
            for &(b2, c2) in &other.terms {
                out.push(b1 + b2, c1 * c2);
            }
        }
        out
    }

    /// `z ↦ m(z + a)`.
    fn translated(&self, a: Complex64) -> ExpSum {
        ExpSum {
            terms: self.terms.iter().map(|&(b, c)| (b, c * (b * a).exp())).collect(),
        }
    }

    fn scaled(&self, s: Complex64) -> ExpSum {
        ExpSum {
            terms: self.terms.iter().map(|&(b, c)| (b, c * s)).collect(),
        }
    }

    /// Largest `|Re β|`, the extra exponential growth the multiplier adds.
    pub fn growth(&self) -> f64 {
        self.terms.iter().map(|t| t.0.re.abs()).fold(0.0, f64::max)
    }
}

/// `f ↦ Σ m_k(z) f(z + s_k)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DifferenceOperator {
    /// Pairs `(shift, multiplier)`.
    pub terms: Vec<(Complex64, ExpSum)>,
}

/// `T_y f(z) = f(z + y)`.
pub fn shift_op(y: Complex64) -> DifferenceOperator {
    DifferenceOperator {
        terms: vec![(y, ExpSum::constant(one()))],
    }
}

/// `S_y f(z) = e^{2πiz/y} f(z)`.
pub fn mult_op(y: Complex64) -> Result<DifferenceOperator> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("S_y needs y != 0".into()));
    }
    Ok(DifferenceOperator {
        terms: vec![(Complex64::new(0.0, 0.0), ExpSum::exp(2.0 * PI * I / y, one()))],
    })
}

impl DifferenceOperator {
    pub fn identity() -> Self {
        Self::scalar(one())
    }

    pub fn scalar(c: Complex64) -> Self {
        DifferenceOperator {
            terms: vec![(Complex64::new(0.0, 0.0), ExpSum::constant(c))],
        }
    }

    fn push(&mut self, s: Complex64, m: ExpSum) {
        match self.terms.iter_mut().find(|t| close(t.0, s)) {
            Some(t) => t.1 = t.1.add(&m),
            None => self.terms.push((s, m)),
        }
    }

    pub fn add(&self, other: &DifferenceOperator) -> DifferenceOperator {
        let mut out = self.clone();
        for (s, m) in &other.terms {
            out.push(*s, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &DifferenceOperator) -> DifferenceOperator {
        self.add(&other.scale(-one()))
    }

    pub fn scale(&self, c: Complex64) -> DifferenceOperator {
        DifferenceOperator {
            terms: self.terms.iter().map(|(s, m)| (*s, m.scaled(c))).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DifferenceOperator) -> DifferenceOperator {
        let mut out = DifferenceOperator::default();
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                out.push(*a + *b, ma.mul(&mb.translated(*a)));
            }
        }
        out
    }

    pub fn shifts(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn apply<F>(&self, f: F, z: Complex64) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, m) in &self.terms {
            acc += m.eval(z) * f(z + s)?;
        }
        Ok(acc)
    }

    /// `Σ |multiplier term| · |f(z + shift)|`, the size of the terms `apply`
    /// adds up before any cancellation.
    pub fn magnitude<F>(&self, f: F, z: Complex64) -> Result<f64>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let mut acc = 0.0;
        for (s, m) in &self.terms {
            let size: f64 = m.terms.iter().map(|(b, c)| (c * (b * z).exp()).norm()).sum();
            acc += size * f(z + s)?.norm();
        }
        Ok(acc)
    }

    /// The image of a handle. Poles are the union of the shifted input poles;
    /// the growth rate picks up the largest multiplier exponent.
    pub fn apply_handle(&self, f: &FunctionHandle) -> FunctionHandle {
        let op = self.clone();
        let e = f.evaluator();
        let mut poles = Vec::new();
        for s in self.shifts() {
            poles.extend(f.poles.iter().map(|p| p.shifted(-s)));
        }
        let extra = self.terms.iter().map(|t| t.1.growth()).fold(0.0, f64::max);
        let mut out = FunctionHandle::new(move |z| op.apply(|u| e(u), z), f.growth_rate + extra).with_poles(poles);
        if let Some(p) = f.algebraic_decay {
            out = out.with_algebraic_decay(p);
        }
        out
    }
}

/// Generators of the extended modular double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    K,
    KInv,
    E,
    F,
    KTilde,
    KTildeInv,
    ETilde,
    FTilde,
    XHat(Complex64),
}

impl Generator {
    pub fn parse(s: &str) -> Result<Generator> {
        Ok(match s {
            "K" => Generator::K,
            "Kinv" | "K^-1" => Generator::KInv,
            "E" => Generator::E,
            "F" => Generator::F,
            "Kt" | "Ktilde" => Generator::KTilde,
            "Ktinv" | "Ktilde^-1" => Generator::KTildeInv,
            "Et" | "Etilde" => Generator::ETilde,
            "Ft" | "Ftilde" => Generator::FTilde,
            other => return Err(Error::Config(format!("unknown generator {other}"))),
        })
    }
}

fn qq(pair: &ModulusPair) -> (Complex64, Complex64) {
    (pair.q, pair.q - 1.0 / pair.q)
}

/// `π_λ(X)` for a generator `X`. The tilde generators are the untilded ones
/// for the swapped pair.
pub fn pi_lambda(gen: Generator, lambda: Complex64, pair: &ModulusPair) -> DifferenceOperator {
    let (w1, w2) = (pair.w1, pair.w2);
    match gen {
        Generator::K => shift_op(I * w1),
        Generator::KInv => shift_op(-I * w1),
        Generator::E | Generator::F => {
            let (_, dq) = qq(pair);
            let sq = pair.q_pow(Complex64::new(0.5, 0.0));
            let e = (PI * lambda / w2).exp();
            let (sign, y, k) = match gen {
                Generator::E => (1.0, I * w2, I * w1),
                _ => (-1.0, -I * w2, -I * w1),
            };
            let inner = DifferenceOperator::scalar(e / sq).add(&shift_op(k).scale(sq / e));
            mult_op(y).expect("y != 0").compose(&inner).scale(sign * sq / dq)
        }
        Generator::KTilde => pi_lambda(Generator::K, lambda, &pair.swap()),
        Generator::KTildeInv => pi_lambda(Generator::KInv, lambda, &pair.swap()),
        Generator::ETilde => pi_lambda(Generator::E, lambda, &pair.swap()),
        Generator::FTilde => pi_lambda(Generator::F, lambda, &pair.swap()),
        Generator::XHat(x) => shift_op(x + I * pair.w),
    }
}

/// `qK + q⁻¹K⁻¹ + (q − q⁻¹)² FE`.
pub fn casimir(lambda: Complex64, pair: &ModulusPair) -> DifferenceOperator {
    let (q, dq) = qq(pair);
    let p = |g| pi_lambda(g, lambda, pair);
    p(Generator::K)
        .scale(q)
        .add(&p(Generator::KInv).scale(1.0 / q))
        .add(&p(Generator::F).compose(&p(Generator::E)).scale(dq * dq))
}

/// The scalar by which the Casimir acts.
pub fn casimir_scalar(lambda: Complex64, pair: &ModulusPair) -> Complex64 {
    -2.0 * (2.0 * PI * lambda / pair.w2).cosh()
}

pub fn casimir_apply(lambda: Complex64, pair: &ModulusPair, f: &FunctionHandle) -> FunctionHandle {
    casimir(lambda, pair).apply_handle(f)
}

/// `ν_ρ = 2 cos(2πρ/w2)` and its tilde twin, plus `μ_τ(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistedPrimitiveSpec {
    pub rho: Complex64,
    pub nu_rho: Complex64,
    pub nu_tilde_rho: Complex64,
}

impl TwistedPrimitiveSpec {
    pub fn new(rho: Complex64, pair: &ModulusPair) -> Self {
        TwistedPrimitiveSpec {
            rho,
            nu_rho: nu(rho, pair.w2),
            nu_tilde_rho: nu(rho, pair.w1),
        }
    }

    /// `μ_τ(ρ)`.
    pub fn mu(&self, tau: Complex64, pair: &ModulusPair) -> Complex64 {
        mu(tau, self.rho, pair)
    }

    /// `μ̃_τ(ρ)`.
    pub fn mu_tilde(&self, tau: Complex64, pair: &ModulusPair) -> Complex64 {
        mu(tau, self.rho, &pair.swap())
    }
}

pub fn nu(rho: Complex64, period: f64) -> Complex64 {
    2.0 * (2.0 * PI * rho / period).cos()
}

/// `μ_τ(ρ) = (ν_ρ − ν_τ)/(q − q⁻¹)`.
pub fn mu(tau: Complex64, rho: Complex64, pair: &ModulusPair) -> Complex64 {
    (nu(rho, pair.w2) - nu(tau, pair.w2)) / qq(pair).1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    Plain,
    Tilde,
    Adjoint,
    AdjointTilde,
}

/// `π_λ(Y_ρ)`, `π_λ(Ỹ_ρ)` or the adjoints `π_λ(Y*_ρ)`, `π_λ(Ỹ*_ρ)`.
/// For the adjoint the caller passes the conjugated spectral value.
pub fn twisted_primitive(rho: Complex64, lambda: Complex64, pair: &ModulusPair, which: Twist) -> DifferenceOperator {
    let p = match which {
        Twist::Plain | Twist::Adjoint => *pair,
        Twist::Tilde | Twist::AdjointTilde => pair.swap(),
    };
    let dq = qq(&p).1;
    let e = pi_lambda(Generator::E, lambda, &p);
    let fk = pi_lambda(Generator::F, lambda, &p).compose(&pi_lambda(Generator::K, lambda, &p));
    let k1 = pi_lambda(Generator::K, lambda, &p).sub(&DifferenceOperator::identity());
    let h = |b: f64| p.q_pow(Complex64::new(b, 0.0));
    match which {
        Twist::Plain | Twist::Tilde => e
            .scale(I * h(-0.5))
            .add(&fk.scale(I * h(-0.5)))
            .sub(&k1.scale(nu(rho, p.w2) / dq)),
        Twist::Adjoint | Twist::AdjointTilde => e
            .scale(I * h(0.5))
            .add(&fk.scale(I * h(-1.5)))
            .add(&k1.scale(nu(rho.conj(), p.w2) / dq)),
    }
}

/// Evaluates `Π_k G(z + a_k) / Π_k G(z + b_k)`.
fn g_ratio(ctx: &HypGammaContext, z: Complex64, num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut v = one();
    for a in num {
        v *= ctx.g(z + a)?;
    }
    for b in den {
        v *= ctx.recip(z + b)?;
    }
    Ok(v)
}

/// Handle for `Π G(z + a_k) / Π G(z + b_k)` with its pole sequences.
pub fn g_quotient_handle(ctx: &Arc<HypGammaContext>, num: Vec<Complex64>, den: Vec<Complex64>, growth: f64) -> FunctionHandle {
    let (w1, w2) = (ctx.pair.w1, ctx.pair.w2);
    let mut poles: Vec<PoleSequence> = num.iter().map(|&a| PoleSequence::descending(-a, w1, w2)).collect();
    poles.extend(den.iter().map(|&b| PoleSequence::ascending(-b, w1, w2)));
    let c = ctx.clone();
    FunctionHandle::new(move |z| g_ratio(&c, z, &num, &den), growth).with_poles(poles)
}

/// `H^λ_{τ,ρ}(z) = G(z + λ/2 − 3iw/2 ± iτ) / G(z − λ/2 − iw/2 ± iρ)`.
pub fn h_eigenfunction(ctx: &Arc<HypGammaContext>, tau: Complex64, rho: Complex64, lambda: Complex64) -> FunctionHandle {
    let p = ctx.pair;
    let a = lambda / 2.0 - 1.5 * I * p.w;
    let b = -lambda / 2.0 - 0.5 * I * p.w;
    let growth = p.alpha * (lambda.im - p.w);
    g_quotient_handle(ctx, vec![a + I * tau, a - I * tau], vec![b + I * rho, b - I * rho], growth)
}

/// `F^λ_{υ,σ}(z) = G(z + λ̄/2 − iw/2 ± iῡ) / G(z − λ̄/2 + iw/2 ± iσ̄)`.
pub fn f_eigenfunction(ctx: &Arc<HypGammaContext>, upsilon: Complex64, sigma: Complex64, lambda: Complex64) -> FunctionHandle {
    let p = ctx.pair;
    let lb = lambda.conj();
    let a = lb / 2.0 - 0.5 * I * p.w;
    let b = -lb / 2.0 + 0.5 * I * p.w;
    let (u, s) = (upsilon.conj(), sigma.conj());
    let growth = p.alpha * (-lambda.im - p.w);
    g_quotient_handle(ctx, vec![a + I * u, a - I * u], vec![b + I * s, b - I * s], growth)
}

/// Coefficients of the first-order form of `π_λ(Y_ρ) f = μ_τ(ρ) f`:
/// `(q − q⁻¹)(π_λ(Y_ρ) − μ_τ(ρ)) f(z) = l(z) f(z) − r(z) f(z + iw1)`.
pub fn first_order_coeffs(
    tau: Complex64,
    rho: Complex64,
    lambda: Complex64,
    pair: &ModulusPair,
    z: Complex64,
) -> (Complex64, Complex64) {
    let w2 = pair.w2;
    let sq = pair.q_pow(Complex64::new(0.5, 0.0));
    let el = (PI * lambda / w2).exp();
    let ep = (2.0 * PI * z / w2).exp();
    let l = I * ep * el / sq - I * sq / (ep * el) + nu(tau, w2);
    let r = -I * ep * sq / el + I * el / (ep * sq) + nu(rho, w2);
    (l, r)
}

/// Right-hand side ratio of `f(z + iw1/2) = ratio(z) f(z − iw1/2)` written as
/// a product of hyperbolic cosines.
pub fn first_order_ratio(tau: Complex64, rho: Complex64, lambda: Complex64, pair: &ModulusPair, z: Complex64) -> Complex64 {
    let c = |u: Complex64| (PI / pair.w2 * u).cosh();
    let a = z + lambda / 2.0 - 1.5 * I * pair.w;
    let b = z - lambda / 2.0 - 0.5 * I * pair.w;
    c(a + I * tau) * c(a - I * tau) / (c(b + I * rho) * c(b - I * rho))
}

/// `⟨f, g⟩ = ∫_ℝ f(z) conj(g(z)) dz`.
pub fn sesquilinear(f: &FunctionHandle, g: &FunctionHandle, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let growth = f.growth_rate + g.growth_rate;
    if !(growth < 0.0) {
        return Err(Error::Divergence(format!(
            "growth rates sum to {growth}, the form needs a negative sum"
        )));
    }
    let h = f.mul(&g.reflected());
    let mut s = *spec;
    s.truncation = spec.truncation_for(-growth, 0.0, 1.0);
    integrate_line(&h, &s)
}

/// Elements of the span on which the adjoint relation is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdjointElement {
    K,
    E,
    F,
    FK,
    EKInv,
}

impl AdjointElement {
    pub const ALL: [AdjointElement; 5] = [
        AdjointElement::K,
        AdjointElement::E,
        AdjointElement::F,
        AdjointElement::FK,
        AdjointElement::EKInv,
    ];

    /// `π_λ(X)` and `π_λ(X*)`.
    pub fn operators(&self, lambda: Complex64, pair: &ModulusPair) -> (DifferenceOperator, DifferenceOperator) {
        let p = |g| pi_lambda(g, lambda, pair);
        let m = -one();
        match self {
            AdjointElement::K => (p(Generator::K), p(Generator::K)),
            AdjointElement::E => (p(Generator::E), p(Generator::E).scale(m)),
            AdjointElement::F => (p(Generator::F), p(Generator::F).scale(m)),
            AdjointElement::FK => (
                p(Generator::F).compose(&p(Generator::K)),
                p(Generator::K).compose(&p(Generator::F)).scale(m),
            ),
            AdjointElement::EKInv => (
                p(Generator::E).compose(&p(Generator::KInv)),
                p(Generator::KInv).compose(&p(Generator::E)).scale(m),
            ),
        }
    }
}

/// `(⟨π_λ(X) f, g⟩, ⟨f, π_λ̄(X*) g⟩)`.
pub fn adjoint_pair(
    x: AdjointElement,
    lambda: Complex64,
    pair: &ModulusPair,
    f: &FunctionHandle,
    g: &FunctionHandle,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let (op, _) = x.operators(lambda, pair);
    let (_, adj) = x.operators(lambda.conj(), pair);
    let lhs = sesquilinear(&op.apply_handle(f), g, spec)?.value;
    let rhs = sesquilinear(f, &adj.apply_handle(g), spec)?.value;
    Ok((lhs, rhs))
}

/// `(B, C, D)` of the radial part `Ω(x) = B(x)K + C(x) + D(x)K⁻¹`.
pub fn radial_coeffs(gamma: &GammaSet, pair: &ModulusPair, x: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let g = gamma.g;
    let qi = 1.0 / pair.q;
    let b = qi * coeff_a(pair, &GammaSet::new([g[0], -g[0], g[1], -g[1]]), x)?;
    let d = qi * coeff_a(pair, &GammaSet::new([g[2], -g[2], g[3], -g[3]]), -x)?;
    let h = gamma.ghat0() / pair.w1;
    let c = pair.q_pow(-1.0 - 2.0 * h)
        * (-coeff_a(pair, gamma, x)? - coeff_a(pair, gamma, -x)? + 1.0 + pair.q_pow(2.0 + 4.0 * h));
    Ok((b, c, d))
}

/// Gaussian probes `e^{−(z − c)²}` with centres drawn from a seeded stream.
pub fn gaussian_probes(count: usize, seed: u64) -> Vec<(Complex64, FunctionHandle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            (c, FunctionHandle::entire(move |z: Complex64| (-(z - c) * (z - c)).exp(), -4.0))
        })
        .collect()
}

/// Sample points `x + iy` drawn from the same kind of stream.
pub fn sample_points(count: usize, seed: u64, re: f64, im: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Complex64::new(rng.gen_range(-re..re), rng.gen_range(-im..im)))
        .collect()
}

//! The hyperbolic gamma function `G(w1, w2; z)`.
//!
//! Inside the strip `|Im z| < w − margin` the exponent `g` is an integral of an
//! even function analytic in `|Im y| < π/max(w1, w2)`, so a shifted trapezoid
//! sum converges geometrically. Outside the strip the difference equations
//! carry `z` back in.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{c64, ModulusPair, I};
use crate::quad::QuadratureSpec;

/// Bernoulli numbers `B_0, B_2, …, B_22`.
const BERNOULLI: [f64; 12] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

const TAYLOR_TERMS: usize = 11;
const LEVELS: usize = 72;
const LEVEL_RATIO: f64 = 0.85;
const TARGET: f64 = 38.0;
const CACHE_LIMIT: usize = 1 << 16;

/// Coefficients of `x / sinh x = Σ c_n x^{2n}`.
fn x_over_sinh() -> [f64; TAYLOR_TERMS + 1] {
    let mut c = [0.0; TAYLOR_TERMS + 1];
    let mut fact = 1.0;
    for n in 0..=TAYLOR_TERMS {
        if n > 0 {
            fact *= (2 * n - 1) as f64 * (2 * n) as f64;
        }
        c[n] = (2.0 - 2f64.powi(2 * n as i32)) * BERNOULLI[n] / fact;
    }
    c
}

struct Kernel {
    h: f64,
    /// `1 / (2 y sinh(w1 y) sinh(w2 y))` at `y_j = (j + ½) h`.
    k: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    W1,
    W2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub m: u32,
    pub n: u32,
    pub point: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Zeros,
    Poles,
}

/// Value of `G` with bookkeeping about how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaEval {
    pub value: Complex64,
    pub steps: u32,
    pub pole_distance: f64,
}

pub struct HypGammaContext {
    pub pair: ModulusPair,
    pub spec: QuadratureSpec,
    pub strip_margin: f64,
    levels: Vec<OnceLock<Kernel>>,
    sinh_coeffs: [f64; TAYLOR_TERMS + 1],
    cache: Mutex<HashMap<(u64, u64), Complex64>>,
}

impl std::fmt::Debug for HypGammaContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HypGammaContext")
            .field("pair", &self.pair)
            .field("strip_margin", &self.strip_margin)
            .finish()
    }
}

impl HypGammaContext {
    pub fn new(pair: ModulusPair) -> Self {
        Self::with_spec(pair, QuadratureSpec::default(), pair.w / 5.0).expect("default margin is valid")
    }

    pub fn with_spec(pair: ModulusPair, spec: QuadratureSpec, strip_margin: f64) -> Result<Self> {
        if !(strip_margin > 0.0 && strip_margin < pair.w / 4.0) {
            return Err(Error::Config(format!(
                "strip margin {strip_margin} must lie in (0, w/4)"
            )));
        }
        Ok(HypGammaContext {
            pair,
            spec,
            strip_margin,
            levels: (0..LEVELS).map(|_| OnceLock::new()).collect(),
            sinh_coeffs: x_over_sinh(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Context for the swapped pair `(w2, w1)`.
    pub fn swapped(&self) -> Self {
        let p = self.pair.swap();
        Self::with_spec(p, self.spec, self.strip_margin).expect("same margin")
    }

    fn strip_half_width(&self) -> f64 {
        self.pair.w - self.strip_margin
    }

    fn delta_min(&self) -> f64 {
        1e-8 * self.pair.w
    }

    /// Half-width `d` of the analyticity strip used for the step size.
    fn analytic_width(&self) -> f64 {
        0.75 * PI / self.pair.w1.max(self.pair.w2)
    }

    fn kernel(&self, level: usize) -> &Kernel {
        self.levels[level].get_or_init(|| {
            let (a, b) = (self.pair.w1, self.pair.w2);
            let h = 2.0 * PI * self.analytic_width() / TARGET * LEVEL_RATIO.powi(level as i32);
            let ymax = (TARGET + 6.0) / (2.0 * self.strip_margin);
            let n = (ymax / h).ceil() as usize + 1;
            let k = (0..n)
                .map(|j| {
                    let y = (j as f64 + 0.5) * h;
                    1.0 / (2.0 * y * (a * y).sinh() * (b * y).sinh())
                })
                .collect();
            Kernel { h, k }
        })
    }

    /// `f(y) = (sin(2yz)/(2 sinh(w1 y) sinh(w2 y)) − z/(w1 w2 y))/y` from its
    /// Taylor expansion at 0.
    fn taylor_coeffs(&self, z: Complex64) -> [Complex64; TAYLOR_TERMS] {
        let (a, b) = (self.pair.w1, self.pair.w2);
        let c = &self.sinh_coeffs;
        let mut p = [0.0; TAYLOR_TERMS + 1];
        for n in 0..=TAYLOR_TERMS {
            p[n] = (0..=n)
                .map(|i| c[i] * a.powi(2 * i as i32) * c[n - i] * b.powi(2 * (n - i) as i32))
                .sum();
        }
        let mut s = [Complex64::new(0.0, 0.0); TAYLOR_TERMS + 2];
        let two_z = 2.0 * z;
        let mut term = two_z;
        for (j, sj) in s.iter_mut().enumerate() {
            *sj = term;
            let jf = j as f64;
            term *= -two_z * two_z / ((2.0 * jf + 2.0) * (2.0 * jf + 3.0));
        }
        let mut out = [Complex64::new(0.0, 0.0); TAYLOR_TERMS];
        for (idx, o) in out.iter_mut().enumerate() {
            let k = idx + 2;
            let mut d = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let n = k - 1 - j;
                if n <= TAYLOR_TERMS {
                    d += s[j] * p[n];
                }
            }
            *o = d / (2.0 * a * b);
        }
        out
    }

    /// The exponent `g(w1, w2; z)` for `|Im z| < w − strip_margin`.
    pub fn g_strip(&self, z: Complex64) -> Result<Complex64> {
        let bound = self.strip_half_width();
        if !(z.im.abs() < bound) || !z.re.is_finite() {
            return Err(Error::StripViolation { z, bound });
        }
        if z == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let (a, b) = (self.pair.w1, self.pair.w2);
        let d = self.analytic_width();
        let h_star = 2.0 * PI * d / (TARGET + 2.0 * d * z.re.abs());
        let h0 = 2.0 * PI * d / TARGET;
        let level = ((h0 / h_star).ln() / (1.0 / LEVEL_RATIO).ln()).ceil().max(0.0) as usize;
        let ker = self.kernel(level.min(LEVELS - 1));
        let h = ker.h;

        let rate = 2.0 * (self.pair.w - z.im.abs());
        let n = (((TARGET + 2.0) / rate / h).ceil() as usize + 1).min(ker.k.len());

        let y_taylor = 0.5 / a.max(b).max(2.0 * z.norm());
        let n_taylor = ((y_taylor / h - 0.5).ceil().max(0.0) as usize).min(n);

        let mut sum = Complex64::new(0.0, 0.0);
        let mut inv_sq = 0.0;
        if n_taylor > 0 {
            let t = self.taylor_coeffs(z);
            for j in 0..n_taylor {
                let y = (j as f64 + 0.5) * h;
                let y2 = y * y;
                let mut acc = Complex64::new(0.0, 0.0);
                for c in t.iter().rev() {
                    acc = acc * y2 + c;
                }
                sum += acc;
                inv_sq += 1.0 / ((j as f64 + 0.5) * (j as f64 + 0.5));
            }
        }
        let step = (2.0 * I * h * z).exp();
        let mut e = Complex64::new(0.0, 0.0);
        for j in n_taylor..n {
            if (j - n_taylor).is_multiple_of(16) {
                e = (2.0 * I * (j as f64 + 0.5) * h * z).exp();
            } else {
                e *= step;
            }
            let sin = (e - e.inv()) / (2.0 * I);
            sum += ker.k[j] * sin;
        }
        let tail = 0.5 * PI * PI - inv_sq;
        Ok(h * sum - z * tail / (a * b * h))
    }

    fn in_strip(&self, z: Complex64) -> Result<Complex64> {
        Ok((I * self.g_strip(z)?).exp())
    }

    /// Distance from `z` to the nearest point of `Λ₊` (`sign = 1`) or `−Λ₊` (`sign = −1`).
    fn lattice_distance(&self, z: Complex64, sign: f64) -> (f64, Complex64) {
        let (w1, w2, w) = (self.pair.w1, self.pair.w2, self.pair.w);
        let t = sign * z.im - w;
        let mut best = (f64::INFINITY, c64(0.0, sign * w));
        let mmax = (t.max(0.0) / w1).floor() as i64 + 1;
        for m in 0..=mmax {
            let rest = t - m as f64 * w1;
            for n in [(rest / w2).floor(), (rest / w2).ceil()] {
                if n < 0.0 {
                    continue;
                }
                let p = c64(0.0, sign * (w + m as f64 * w1 + n * w2));
                let dd = (z - p).norm();
                if dd < best.0 {
                    best = (dd, p);
                }
            }
        }
        best
    }

    pub fn nearest_pole(&self, z: Complex64) -> (f64, Complex64) {
        self.lattice_distance(z, -1.0)
    }

    pub fn nearest_zero(&self, z: Complex64) -> (f64, Complex64) {
        self.lattice_distance(z, 1.0)
    }

    /// `G(z)` with continuation bookkeeping. `prefer` forces the step used
    /// whenever it keeps the argument above the strip's lower edge.
    pub fn eval_detailed(&self, z: Complex64, prefer: Option<Step>) -> Result<GammaEval> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite argument {z}")));
        }
        let (pd, pole) = self.nearest_pole(z);
        if pd < self.delta_min() {
            return Err(Error::Pole { z, pole, distance: pd });
        }
        let top = self.strip_half_width();
        if z.im.abs() < top {
            return Ok(GammaEval {
                value: self.in_strip(z)?,
                steps: 0,
                pole_distance: pd,
            });
        }
        if z.im < 0.0 {
            let r = self.eval_detailed(-z, prefer)?;
            return Ok(GammaEval {
                value: r.value.inv(),
                steps: r.steps,
                pole_distance: pd,
            });
        }
        let (zd, zero) = self.nearest_zero(z);
        if zd < self.delta_min() {
            return Err(Error::ZeroCrossing { z: zero });
        }
        let (w1, w2) = (self.pair.w1, self.pair.w2);
        let mut u = z;
        let mut factor = Complex64::new(1.0, 0.0);
        let mut steps = 0;
        while u.im >= top {
            let land = |s: f64| (u.im - s).abs();
            let step = match prefer {
                Some(Step::W1) if u.im - w1 > -top => Step::W1,
                Some(Step::W2) if u.im - w2 > -top => Step::W2,
                Some(Step::W1) => Step::W2,
                Some(Step::W2) => Step::W1,
                None => {
                    if land(w2) < land(w1) {
                        Step::W2
                    } else {
                        Step::W1
                    }
                }
            };
            let (s, other) = match step {
                Step::W1 => (w1, w2),
                Step::W2 => (w2, w1),
            };
            factor *= 2.0 * (PI * (u - I * (0.5 * s)) / other).cosh();
            u -= I * s;
            steps += 1;
        }
        Ok(GammaEval {
            value: factor * self.in_strip(u)?,
            steps,
            pole_distance: pd,
        })
    }

    /// `G(w1, w2; z)`, memoised.
    pub fn g(&self, z: Complex64) -> Result<Complex64> {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.eval_detailed(z, None)?.value;
        let mut c = self.cache.lock().unwrap();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, v);
        Ok(v)
    }

    /// `1/G(z)`, computed as `G(−z)`.
    pub fn recip(&self, z: Complex64) -> Result<Complex64> {
        self.g(-z)
    }

    pub fn residue_minus_iw(&self) -> Complex64 {
        I * self.pair.sqrt_w1w2() / (2.0 * PI)
    }

    /// Leading factor of `G(z − a)/G(z − b)` for large `Re z`.
    pub fn quotient_asymptotic(&self, a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
        let need = self.pair.w1.max(self.pair.w2) + a.re.max(b.re);
        if !(z.re > need) {
            return Err(Error::Domain(format!(
                "quotient asymptotics need Re z > {need}, got {z}"
            )));
        }
        Ok(Self::quotient_factor(&self.pair, a, b, z))
    }

    fn quotient_factor(pair: &ModulusPair, a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
        (PI / (2.0 * I * pair.w1 * pair.w2) * (2.0 * z * (b - a) + a * a - b * b)).exp()
    }

    pub fn pole_zero_lattice(&self, which: LatticeKind, count: usize) -> Vec<LatticePoint> {
        let (w1, w2, w) = (self.pair.w1, self.pair.w2, self.pair.w);
        let sign = match which {
            LatticeKind::Zeros => 1.0,
            LatticeKind::Poles => -1.0,
        };
        let mut pts = Vec::new();
        let lim = count as u32;
        for m in 0..lim {
            for n in 0..lim {
                let p = c64(0.0, sign * (w + m as f64 * w1 + n as f64 * w2));
                pts.push(LatticePoint { m, n, point: p });
            }
        }
        pts.sort_by(|a, b| a.point.norm().total_cmp(&b.point.norm()).then(a.m.cmp(&b.m)));
        pts.truncate(count);
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_modulus_pair;

    fn ctx(w1: f64, w2: f64) -> HypGammaContext {
        HypGammaContext::new(make_modulus_pair(w1, w2).unwrap())
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    /// Plain trapezoid on `[0, Y]` with halving steps. The algebraic tail is
    /// removed with `u(y) = −z(1 − e^{−y²})/(w1 w2 y²)`, `∫_0^∞ u = −z√π/(w1 w2)`,
    /// leaving an even integrand with fast decay, so the end corrections vanish.
    fn g_oracle(w1: f64, w2: f64, z: Complex64) -> Complex64 {
        let ab = w1 * w2;
        let f = |y: f64| -> Complex64 {
            if y == 0.0 {
                return -(4.0 * z * z * z + z * (w1 * w1 + w2 * w2)) / (6.0 * ab) + z / ab;
            }
            (2.0 * y * z).sin() / (2.0 * y * (w1 * y).sinh() * (w2 * y).sinh()) - z * (-y * y).exp() / (ab * y * y)
        };
        let ymax = 40.0 / (2.0 * (0.5 * (w1 + w2) - z.im.abs()));
        let mut n = 64usize;
        let mut prev = Complex64::new(f64::NAN, 0.0);
        loop {
            let h = ymax / n as f64;
            let mut s = 0.5 * f(0.0);
            for j in 1..n {
                s += f(j as f64 * h);
            }
            let v = h * s - z * PI.sqrt() / ab;
            if (v - prev).norm() < 1e-13 || n > 1 << 20 {
                return v;
            }
            prev = v;
            n *= 2;
        }
    }

    #[test]
    fn g_at_zero() {
        assert_eq!(ctx(1.0, 2f64.sqrt()).g_strip(c64(0.0, 0.0)).unwrap(), c64(0.0, 0.0));
    }

    #[test]
    fn g_matches_trapezoid_oracle() {
        let c = ctx(1.0, 1.0);
        let z = c64(0.25, 0.0);
        assert!((c.g_strip(z).unwrap() - g_oracle(1.0, 1.0, z)).norm() < 1e-10);
        let c = ctx(1.0, 2f64.sqrt());
        for z in [c64(0.3, 0.4), c64(-1.7, -0.6), c64(4.0, 0.2), c64(0.01, 0.9)] {
            let g = c.g_strip(z).unwrap();
            let o = g_oracle(1.0, 2f64.sqrt(), z);
            assert!((g - o).norm() < 1e-10, "z={z} g={g} oracle={o}");
        }
    }

    #[test]
    fn g_imaginary_on_imaginary_axis() {
        let c = ctx(1.0, 2f64.sqrt());
        let g = c.g_strip(c64(0.0, 0.37)).unwrap();
        assert!(g.re.abs() < 1e-14);
    }

    #[test]
    fn strip_violation() {
        let c = ctx(1.0, 2f64.sqrt());
        assert!(matches!(c.g_strip(c64(0.0, 1.2)), Err(Error::StripViolation { .. })));
    }

    #[test]
    fn special_values() {
        let c = ctx(1.0, 2f64.sqrt());
        assert!((c.g(c64(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((c.g(c64(0.0, 0.5)).unwrap() - 2f64.sqrt()).norm() < 1e-13);
        let c = ctx(1.3, 0.7);
        assert!((c.g(c64(0.0, 0.65)).unwrap() - 2f64.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn continuation_consistency() {
        let c = ctx(1.0, 2f64.sqrt());
        let z = c64(0.3, 1.7);
        let lhs = c.g(z).unwrap();
        let rhs = 2.0 * (PI * (z - I * 0.5) / 2f64.sqrt()).cosh() * c.g(z - I).unwrap();
        assert!(rel(lhs, rhs) < 1e-10);
        let a = c.eval_detailed(c64(0.4, 3.3), Some(Step::W1)).unwrap();
        let b = c.eval_detailed(c64(0.4, 3.3), Some(Step::W2)).unwrap();
        assert!(rel(a.value, b.value) < 1e-11);
        assert!(a.steps > 0 && b.steps > 0);
    }

    #[test]
    fn poles_and_zeros() {
        let c = ctx(1.0, 2f64.sqrt());
        let w = c.pair.w;
        assert!(matches!(c.g(c64(0.0, -w)), Err(Error::Pole { .. })));
        assert!(matches!(c.g(c64(0.0, -w - 2f64.sqrt())), Err(Error::Pole { .. })));
        assert!(matches!(c.g(c64(0.0, w + 1.0)), Err(Error::ZeroCrossing { .. })));
        let z = c.pole_zero_lattice(LatticeKind::Zeros, 3);
        assert!((z[0].point - I * w).norm() < 1e-15);
        assert!((z[1].point - I * (w + 1.0)).norm() < 1e-15);
        assert!((z[2].point - I * (w + 2f64.sqrt())).norm() < 1e-15);
        let p = c.pole_zero_lattice(LatticeKind::Poles, 1);
        assert!((p[0].point + I * w).norm() < 1e-15);
    }

    #[test]
    fn residue_values() {
        assert!((ctx(1.0, 1.0).residue_minus_iw() - I / (2.0 * PI)).norm() < 1e-16);
        assert!((ctx(1.0, 4.0).residue_minus_iw() - I / PI).norm() < 1e-16);
    }

    #[test]
    fn quotient_asymptotic_basics() {
        let c = ctx(1.0, 2f64.sqrt());
        let a = c64(0.1, 0.05);
        assert!((c.quotient_asymptotic(a, a, c64(3.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let b = c64(0.3, 0.0);
        let z = c64(3.0, 0.2);
        let p = c.quotient_asymptotic(a, b, z).unwrap() * c.quotient_asymptotic(b, a, z).unwrap();
        assert!((p - 1.0).norm() < 1e-14);
        assert!(c.quotient_asymptotic(a, b, c64(1.0, 0.0)).is_err());
    }
}

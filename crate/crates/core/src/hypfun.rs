//! Ruijsenaars' function `R`, the matrix coefficient `ψ`, its renormalisation
//! `S`, and the residual checks built on them.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{HypGammaContext, Step};
use crate::handle::FunctionHandle;
use crate::params::{domain_report, lambda_n, DomainReport, GammaSet, ModulusPair, I};
use crate::qseries::{apply_aw, c_function, coeff_a, normalization_n, q_pochhammer, AWOperatorSpec, Side};
use crate::quad::{
    build_indented_contour, integrate_contour, integrate_line, integrate_path, Contour, Direction, IntegralResult,
    QuadratureSpec,
};
use crate::repr::{g_quotient_handle, radial_coeffs};

/// Relative accuracy credited to every `G` value in a prefactor.
const G_REL_ERR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub x: Complex64,
    pub lambda: Complex64,
}

impl EvalPoint {
    pub fn new(x: Complex64, lambda: Complex64) -> Self {
        EvalPoint { x, lambda }
    }

    pub fn dual(&self) -> EvalPoint {
        EvalPoint { x: self.lambda, lambda: self.x }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypEvalResult {
    pub value: Complex64,
    pub quadrature: IntegralResult,
    pub domain: DomainReport,
    pub contour_used: Contour,
}

impl HypEvalResult {
    pub fn error(&self) -> f64 {
        self.quadrature.error_estimate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    R,
    S,
}

/// Shared state for all evaluations with one modulus pair.
#[derive(Debug, Clone)]
pub struct HypContext {
    pub gamma: Arc<HypGammaContext>,
    pub spec: QuadratureSpec,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn exact(value: Complex64, contour: Contour, domain: DomainReport) -> HypEvalResult {
    HypEvalResult {
        value,
        quadrature: IntegralResult {
            value,
            error_estimate: 0.0,
            panels_used: 0,
            tail_bound: 0.0,
        },
        domain,
        contour_used: contour,
    }
}

impl HypContext {
    pub fn new(pair: ModulusPair) -> Self {
        HypContext {
            gamma: Arc::new(HypGammaContext::new(pair)),
            spec: QuadratureSpec::default(),
        }
    }

    pub fn with_spec(pair: ModulusPair, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(HypContext {
            gamma: Arc::new(HypGammaContext::new(pair)),
            spec,
        })
    }

    pub fn pair(&self) -> ModulusPair {
        self.gamma.pair
    }

    /// The same context for `(w2, w1)`.
    pub fn swapped(&self) -> HypContext {
        HypContext {
            gamma: Arc::new(self.gamma.swapped()),
            spec: self.spec,
        }
    }

    fn g(&self, z: Complex64) -> Result<Complex64> {
        self.gamma.g(z)
    }

    fn rg(&self, z: Complex64) -> Result<Complex64> {
        self.gamma.recip(z)
    }

    fn decay(&self) -> f64 {
        let p = self.pair();
        2.0 * p.alpha * p.w
    }

    /// Integrates `f` along the line or along a contour separating its pole
    /// sequences. The absolute tolerance is measured against the peak
    /// magnitude of the integrand when that is below one.
    fn integrate(&self, f: &FunctionHandle, extent: f64, deform: bool) -> Result<(IntegralResult, Contour)> {
        let rate = -f.growth_rate;
        let probe_t = extent + 2.0;
        let mut peak: f64 = 0.0;
        for k in 0..=40 {
            let t = -probe_t + 2.0 * probe_t * k as f64 / 40.0;
            if let Ok(v) = f.eval(Complex64::new(t, 0.0)) {
                if v.norm().is_finite() {
                    peak = peak.max(v.norm());
                }
            }
        }
        let mut spec = self.spec;
        if peak > 0.0 && peak < 1.0 {
            spec.abs_tol *= peak;
        }
        spec.truncation = spec.truncation_for(rate, extent, peak.max(1e-300));
        let t = spec.truncation;
        if deform {
            let desc: Vec<_> = f.poles.iter().filter(|p| p.direction == Direction::Descending).copied().collect();
            let asc: Vec<_> = f.poles.iter().filter(|p| p.direction == Direction::Ascending).copied().collect();
            let contour = build_indented_contour(&desc, &asc, t)?;
            Ok((integrate_contour(f, &contour, &spec)?, contour))
        } else {
            Ok((integrate_line(f, &spec)?, Contour::line(t)))
        }
    }

    /// The integrand of `ψ`.
    pub fn psi_integrand(&self, gamma: &GammaSet, x: Complex64, lambda: Complex64) -> FunctionHandle {
        let p = self.pair();
        let [rho, sigma, tau, ups] = gamma.rstu();
        let hw = 0.5 * I * p.w;
        let a = x + lambda / 2.0 - hw;
        let b = -lambda / 2.0 - hw;
        let c = x - lambda / 2.0 + hw;
        let d = lambda / 2.0 + hw;
        g_quotient_handle(
            &self.gamma,
            vec![a + I * tau, a - I * tau, b + I * sigma, b - I * sigma],
            vec![c + I * rho, c - I * rho, d + I * ups, d - I * ups],
            -self.decay(),
        )
    }

    fn psi_extent(&self, gamma: &GammaSet, x: Complex64, lambda: Complex64) -> f64 {
        let p = self.pair();
        x.re.abs() + lambda.re.abs() + p.w1.max(p.w2) + gamma.max_abs()
    }

    /// `ψ(γ; x, λ)` by its integral over the real line. Requires the ψ window.
    pub fn psi(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<HypEvalResult> {
        let dom = domain_report(gamma, pt.lambda, pt.x, &self.pair());
        if !dom.psi_valid {
            return Err(Error::Domain(format!(
                "the ψ integral needs ζ > 0 and |Im x| < ζ (ζ = {}, Im x = {})",
                dom.zeta, pt.x.im
            )));
        }
        let f = self.psi_integrand(gamma, pt.x, pt.lambda);
        let (q, c) = self.integrate(&f, self.psi_extent(gamma, pt.x, pt.lambda), false)?;
        Ok(HypEvalResult { value: q.value, quadrature: q, domain: dom, contour_used: c })
    }

    /// `ψ` continued off the window by integrating over a contour that
    /// separates the pole sequences of the integrand.
    pub fn psi_continued(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<HypEvalResult> {
        let dom = domain_report(gamma, pt.lambda, pt.x, &self.pair());
        let f = self.psi_integrand(gamma, pt.x, pt.lambda);
        let (q, c) = self.integrate(&f, self.psi_extent(gamma, pt.x, pt.lambda), !dom.psi_valid)?;
        Ok(HypEvalResult { value: q.value, quadrature: q, domain: dom, contour_used: c })
    }

    /// `Δ(γ; x) = G(x + iγ2) G(x + iγ3) / (G(x − iγ0) G(x − iγ1))`.
    pub fn delta_gauge(&self, gamma: &GammaSet, x: Complex64) -> Result<Complex64> {
        let g = gamma.g;
        Ok(self.g(x + I * g[2])? * self.g(x + I * g[3])? * self.rg(x - I * g[0])? * self.rg(x - I * g[1])?)
    }

    fn near_lambda_n(&self, gamma: &GammaSet, lambda: Complex64) -> Option<(u32, f64)> {
        let p = self.pair();
        let k = (lambda / (I * p.w1) - (p.w + gamma.ghat0()) / p.w1).re.round();
        if k < 0.0 {
            return None;
        }
        let n = k as u32;
        Some((n, (lambda - lambda_n(n, gamma, &p)).norm()))
    }

    /// `S(γ; x, λ) = N(γ) ψ / (√(w1 w2) Δ(γ; x) Δ(γ̂; λ))`.
    pub fn s_function(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<HypEvalResult> {
        let p = self.pair();
        if let Some((n, d)) = self.near_lambda_n(gamma, pt.lambda) {
            if d < 1e-12 * p.w {
                let v = self.s_at_lambda_n(gamma, pt.x, n)?;
                return Ok(exact(v, Contour::line(self.spec.truncation), domain_report(gamma, pt.lambda, pt.x, &p)));
            }
            if d < 1e-3 * p.w {
                return Err(Error::Domain(format!(
                    "λ is within {d:e} of λ_{n}, where the ψ integrand pinches"
                )));
            }
        }
        let psi = self.psi_continued(gamma, pt)?;
        let pref = normalization_n(&self.gamma, gamma)?
            / (p.sqrt_w1w2() * self.delta_gauge(gamma, pt.x)? * self.delta_gauge(&gamma.dual(), pt.lambda)?);
        let value = pref * psi.value;
        let mut quadrature = psi.quadrature;
        quadrature.value = value;
        quadrature.error_estimate = pref.norm() * psi.quadrature.error_estimate + 11.0 * G_REL_ERR * value.norm();
        Ok(HypEvalResult { value, quadrature, ..psi })
    }

    /// The integrand of `R` without its prefactor.
    pub fn r_integrand(&self, gamma: &GammaSet, x: Complex64, lambda: Complex64) -> FunctionHandle {
        let p = self.pair();
        let g = gamma.g;
        let gh = gamma.ghat0();
        let num = vec![x + I * g[0], -x + I * g[0], lambda + I * gh, -lambda + I * gh];
        let mut den = vec![I * p.w];
        den.extend((1..4).map(|j| I * (g[0] + g[j] + p.w)));
        g_quotient_handle(&self.gamma, num, den, -self.decay())
    }

    fn r_prefactor(&self, gamma: &GammaSet, x: Complex64, lambda: Complex64) -> Result<Complex64> {
        let g0 = gamma.g[0];
        let gh = gamma.ghat0();
        Ok(normalization_n(&self.gamma, gamma)?
            * self.rg(x + I * g0)?
            * self.rg(-x + I * g0)?
            * self.rg(lambda + I * gh)?
            * self.rg(-lambda + I * gh)?
            / self.pair().sqrt_w1w2())
    }

    /// Ruijsenaars' `R(γ; x, λ)`.
    pub fn r_function(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<HypEvalResult> {
        let p = self.pair();
        let dom = domain_report(gamma, pt.lambda, pt.x, &p);
        for l in [pt.lambda, -pt.lambda] {
            if let Some((n, d)) = self.near_lambda_n(gamma, l) {
                if d < 1e-12 * p.w {
                    let v = self.r_at_lambda_n(gamma, pt.x, n)?;
                    return Ok(exact(v, Contour::line(self.spec.truncation), dom));
                }
                if d < 1e-3 * p.w {
                    return Err(Error::Domain(format!(
                        "λ is within {d:e} of ±λ_{n}, where the R integrand pinches"
                    )));
                }
            }
        }
        let f = self.r_integrand(gamma, pt.x, pt.lambda);
        let extent = pt.x.re.abs() + pt.lambda.re.abs() + p.w1.max(p.w2) + gamma.max_abs();
        let (q, c) = self.integrate(&f, extent, true)?;
        let pref = self.r_prefactor(gamma, pt.x, pt.lambda)?;
        let value = pref * q.value;
        let quadrature = IntegralResult {
            value,
            error_estimate: pref.norm() * q.error_estimate + 9.0 * G_REL_ERR * value.norm(),
            ..q
        };
        Ok(HypEvalResult { value, quadrature, domain: dom, contour_used: c })
    }

    pub fn eval(&self, which: Which, gamma: &GammaSet, pt: EvalPoint) -> Result<HypEvalResult> {
        match which {
            Which::R => self.r_function(gamma, pt),
            Which::S => self.s_function(gamma, pt),
        }
    }

    pub fn value(&self, which: Which, gamma: &GammaSet, x: Complex64, lambda: Complex64) -> Result<Complex64> {
        Ok(self.eval(which, gamma, EvalPoint::new(x, lambda))?.value)
    }

    /// Residue of `G` at `−iw − i m w1`.
    pub fn g_residue(&self, m: u32) -> Complex64 {
        let p = self.pair();
        let mf = m as f64;
        let q2 = p.q * p.q;
        let pre = (-I * mf * PI * p.w / p.w2).exp() * p.q_pow(Complex64::new(-0.5 * mf * mf, 0.0)) * q_pochhammer(q2, q2, m);
        self.gamma.residue_minus_iw() / pre
    }

    /// `R(γ; x, λ_n)` as the finite residue sum left over when the pinching
    /// poles are moved across the contour.
    pub fn r_at_lambda_n(&self, gamma: &GammaSet, x: Complex64, n: u32) -> Result<Complex64> {
        let p = self.pair();
        let g = gamma.g;
        let gh = gamma.ghat0();
        let lam = lambda_n(n, gamma, &p);
        let mut pref = normalization_n(&self.gamma, gamma)? * self.rg(x + I * g[0])? * self.rg(-x + I * g[0])?
            * self.rg(lam + I * gh)?
            / p.sqrt_w1w2();
        pref *= -2.0 * PI * I / self.g_residue(n);
        let mut sum = zero();
        for k in 0..=n {
            let z = I * ((n - k) as f64 * p.w1);
            let mut t = self.g_residue(k) * self.g_residue(n - k);
            t *= self.g(z + x + I * g[0])? * self.g(z - x + I * g[0])? * self.g(z + lam + I * gh)?;
            for j in 1..4 {
                t *= self.rg(z + I * (g[0] + g[j] + p.w))?;
            }
            sum += t;
        }
        Ok(pref * sum)
    }

    /// `S(γ; x, λ_n)` by the same residue bookkeeping applied to `ψ`.
    pub fn s_at_lambda_n(&self, gamma: &GammaSet, x: Complex64, n: u32) -> Result<Complex64> {
        let p = self.pair();
        let [rho, sigma, tau, ups] = gamma.rstu();
        let gd = gamma.dual().g;
        let lam = lambda_n(n, gamma, &p);
        let hw = 0.5 * I * p.w;
        let delta_hat = self.g(lam - I * gd[1])? * self.rg(lam + I * gd[2])? * self.rg(lam + I * gd[3])?;
        let pref = normalization_n(&self.gamma, gamma)? * delta_hat * (-2.0 * PI * I)
            / (p.sqrt_w1w2() * self.delta_gauge(gamma, x)? * self.g_residue(n));
        let mut sum = zero();
        for k in 0..=n {
            let z = lam / 2.0 - hw - I * sigma - I * (k as f64 * p.w1);
            let a = z + x + lam / 2.0 - hw;
            let c = z + x - lam / 2.0 + hw;
            let mut t = self.g_residue(k) * self.g_residue(n - k);
            t *= self.g(a + I * tau)? * self.g(a - I * tau)? * self.g(z - lam / 2.0 - hw - I * sigma)?;
            t *= self.rg(c + I * rho)? * self.rg(c - I * rho)? * self.rg(z + lam / 2.0 + hw - I * ups)?;
            sum += t;
        }
        Ok(pref * sum)
    }

    /// `|𝓛f − v f|` relative to the size of the terms it combines, for one of
    /// the four Askey-Wilson equations of `R` or `S`.
    pub fn aw_residual(&self, which: Which, step: Step, side: Side, gamma: &GammaSet, pt: EvalPoint) -> Result<f64> {
        let p = self.pair();
        let (op_gamma, at, other) = match side {
            Side::X => (*gamma, pt.x, pt.lambda),
            Side::Lambda => (gamma.dual(), pt.lambda, pt.x),
        };
        let spec = AWOperatorSpec { gamma: op_gamma, pair: p, step };
        let f = |y: Complex64| -> Result<Complex64> {
            match side {
                Side::X => self.value(which, gamma, y, other),
                Side::Lambda => self.value(which, gamma, other, y),
            }
        };
        let oriented = match step {
            Step::W1 => p,
            Step::W2 => p.swap(),
        };
        let h = I * oriented.w1;
        let (f0, fp, fm) = (f(at)?, f(at + h)?, f(at - h)?);
        let lhs = apply_aw(&spec, |y| {
            if y == at {
                Ok(f0)
            } else if y == at + h {
                Ok(fp)
            } else {
                Ok(fm)
            }
        }, at)?;
        let v = spec.eigenvalue(other);
        let ap = coeff_a(&oriented, &op_gamma, at)?;
        let am = coeff_a(&oriented, &op_gamma, -at)?;
        let scale = ap.norm() * (fp.norm() + f0.norm()) + am.norm() * (fm.norm() + f0.norm()) + (v * f0).norm();
        Ok((lhs - v * f0).norm() / scale)
    }

    /// Relative residual of the second-order equation satisfied by `ψ`,
    /// `−2cosh(2πλ/w2) ψ(x) = B ψ(x + iw1) + C ψ(x) + D ψ(x − iw1)`, or its
    /// twin with `w1 ↔ w2`.
    pub fn radial_residual(&self, step: Step, gamma: &GammaSet, pt: EvalPoint) -> Result<f64> {
        let p = match step {
            Step::W1 => self.pair(),
            Step::W2 => self.pair().swap(),
        };
        let h = I * p.w1;
        let psi = |x: Complex64| -> Result<Complex64> { Ok(self.psi_continued(gamma, EvalPoint::new(x, pt.lambda))?.value) };
        let (f0, fp, fm) = (psi(pt.x)?, psi(pt.x + h)?, psi(pt.x - h)?);
        let (b, c, d) = radial_coeffs(gamma, &p, pt.x)?;
        let lhs = -2.0 * (2.0 * PI * pt.lambda / p.w2).cosh() * f0;
        let rhs = b * fp + c * f0 + d * fm;
        let scale = lhs.norm() + (b * fp).norm() + (c * f0).norm() + (d * fm).norm();
        Ok((lhs - rhs).norm() / scale)
    }

    /// Casorati determinant of `S` and `R` in the `iw1` direction with its
    /// natural scale `max |S(z ± iw1/2) R(z ∓ iw1/2)|`.
    pub fn casorati(&self, gamma: &GammaSet, z: Complex64, lambda: Complex64) -> Result<(Complex64, f64)> {
        let h = 0.5 * I * self.pair().w1;
        let sp = self.value(Which::S, gamma, z + h, lambda)?;
        let sm = self.value(Which::S, gamma, z - h, lambda)?;
        let rp = self.value(Which::R, gamma, z + h, lambda)?;
        let rm = self.value(Which::R, gamma, z - h, lambda)?;
        let (a, b) = (sp * rm, sm * rp);
        Ok((a - b, a.norm().max(b.norm())))
    }

    /// `T(z) = sinh(2πz/w2) Π_j G(z − iγ_j − iw1/2) / G(z + iγ_j + iw1/2)`.
    pub fn casorati_t(&self, gamma: &GammaSet, z: Complex64) -> Result<Complex64> {
        let p = self.pair();
        let mut v = (2.0 * PI * z / p.w2).sinh();
        for g in gamma.g {
            v *= self.g(z - I * g - 0.5 * I * p.w1)? * self.rg(z + I * g + 0.5 * I * p.w1)?;
        }
        Ok(v)
    }

    /// `f / (c(γ; x) c(γ̂; λ) N(γ))`.
    pub fn normalized_form(&self, which: Which, gamma: &GammaSet, pt: EvalPoint) -> Result<Complex64> {
        let f = self.eval(which, gamma, pt)?.value;
        let c = c_function(&self.gamma, gamma, pt.x)?
            * c_function(&self.gamma, &gamma.dual(), pt.lambda)?
            * normalization_n(&self.gamma, gamma)?;
        Ok(f / c)
    }

    /// Least-squares slope of `log|f(x)|` at fixed `λ`, fitted on 11 points of
    /// `[5w, 15w]` for `S` and of `[1.5w, 4w]` for `R`, whose contour integral
    /// loses relative accuracy once `|R|` falls towards `1e−12`.
    pub fn growth_estimate(&self, which: Which, gamma: &GammaSet, lambda: Complex64) -> Result<GrowthFit> {
        let w = self.pair().w;
        match which {
            Which::S => self.growth_estimate_on(which, gamma, lambda, 5.0 * w, 15.0 * w),
            Which::R => self.growth_estimate_on(which, gamma, lambda, 1.5 * w, 4.0 * w),
        }
    }

    /// The same fit on `x ∈ [from, to]`.
    pub fn growth_estimate_on(&self, which: Which, gamma: &GammaSet, lambda: Complex64, from: f64, to: f64) -> Result<GrowthFit> {
        let p = self.pair();
        if !(to > from) {
            return Err(Error::Domain(format!("empty fit range [{from}, {to}]")));
        }
        let xs: Vec<f64> = (0..11).map(|k| from + (to - from) * k as f64 / 10.0).collect();
        let mut ys = Vec::with_capacity(xs.len());
        for &x in &xs {
            let v = self.value(which, gamma, Complex64::new(x, 0.0), lambda)?;
            ys.push(v.norm().ln());
        }
        let slope = fit_slope(&xs, &ys);
        let predicted = p.alpha * (lambda.im.abs() - gamma.ghat0().re - p.w);
        Ok(GrowthFit { slope, predicted })
    }

    /// `ψ` split over the five intervals `(−∞, −Re x − ε)`, `(−Re x − ε, −Re x + ε)`,
    /// `(−Re x + ε, −ε)`, `(−ε, ε)`, `(ε, ∞)`, with
    /// `ε = max(w1, w2) + |Re λ|/2 + max |Im(ρ, σ, τ, υ)|`. Needs `Re x > 2ε`.
    pub fn psi_pieces(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<[Complex64; 5]> {
        let p = self.pair();
        let eps = p.w1.max(p.w2)
            + 0.5 * pt.lambda.re.abs()
            + gamma.rstu().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let xr = pt.x.re;
        if !(xr > 2.0 * eps) {
            return Err(Error::Domain(format!("the split needs Re x > 2ε = {}", 2.0 * eps)));
        }
        let whole = self.psi(gamma, pt)?;
        let t = whole.contour_used.truncation();
        let f = self.psi_integrand(gamma, pt.x, pt.lambda);
        let mut spec = self.spec;
        let peak = whole.value.norm().max(f.eval(Complex64::new(-eps, 0.0))?.norm());
        if peak < 1.0 {
            spec.abs_tol *= peak;
        }
        let cuts = [-t, -xr - eps, -xr + eps, -eps, eps, t];
        let mut out = [zero(); 5];
        for j in 0..5 {
            let seg = [Complex64::new(cuts[j], 0.0), Complex64::new(cuts[j + 1], 0.0)];
            out[j] = integrate_path(|z| f.eval(z), &seg, &spec)?.value;
        }
        Ok(out)
    }

    /// `|R − S| / (|R| + |S|)`.
    pub fn verify_r_equals_s(&self, gamma: &GammaSet, pt: EvalPoint) -> Result<f64> {
        let r = self.r_function(gamma, pt)?.value;
        let s = self.s_function(gamma, pt)?.value;
        Ok((r - s).norm() / (r.norm() + s.norm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub predicted: f64,
}

impl GrowthFit {
    pub fn relative_error(&self) -> f64 {
        ((self.slope - self.predicted) / self.predicted).abs()
    }
}

/// Ordinary least-squares slope.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{c64, reference};
    use crate::qseries::aw_polynomial_for;
    use crate::quad::residue_by_contour;

    #[test]
    fn residues_of_g_down_the_w1_column() {
        let (pair, _) = reference();
        let ctx = HypContext::new(pair);
        for m in 0..3u32 {
            let c = -I * (pair.w + m as f64 * pair.w1);
            let num = residue_by_contour(|z| ctx.g(z), c, 0.05, &QuadratureSpec::default()).unwrap();
            let r = ctx.g_residue(m);
            assert!((num - r).norm() < 1e-9 * r.norm(), "m={m}: {num} vs {r}");
        }
    }

    #[test]
    fn lambda_zero_gives_one() {
        let (pair, g) = reference();
        let ctx = HypContext::new(pair);
        for x in [c64(0.1, 0.0), c64(-0.4, 0.05)] {
            let s = ctx.s_at_lambda_n(&g, x, 0).unwrap();
            let r = ctx.r_at_lambda_n(&g, x, 0).unwrap();
            assert!((s - 1.0).norm() < 1e-10, "S = {s}");
            assert!((r - 1.0).norm() < 1e-10, "R = {r}");
        }
    }

    #[test]
    fn reduction_to_polynomials() {
        let (pair, g) = reference();
        let ctx = HypContext::new(pair);
        for n in 1..3 {
            for x in [c64(0.1, 0.0), c64(0.7, -0.1)] {
                let rn = aw_polynomial_for(n, &g, &pair, x).unwrap();
                let s = ctx.s_at_lambda_n(&g, x, n).unwrap();
                let r = ctx.r_at_lambda_n(&g, x, n).unwrap();
                assert!((s - rn).norm() < 1e-9 * rn.norm(), "n={n}: S {s} vs {rn}");
                assert!((r - rn).norm() < 1e-9 * rn.norm(), "n={n}: R {r} vs {rn}");
            }
        }
    }

    #[test]
    fn r_equals_s_at_reference() {
        let (pair, g) = reference();
        let ctx = HypContext::new(pair);
        let d = ctx.verify_r_equals_s(&g, EvalPoint::new(c64(0.1, 0.0), c64(0.12, 0.0))).unwrap();
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn slope_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        assert!((fit_slope(&xs, &ys) - 2.5).abs() < 1e-14);
    }
}

//! Named verification suites, their reports, and grid output.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma::{HypGammaContext, Step};
use crate::handle::FunctionHandle;
use crate::hypfun::{EvalPoint, HypContext, Which};
use crate::params::{c64, lambda_n, ComplexJson, GammaSet, ModulusPair, ParamSet, I};
use crate::qseries::{aw_eigen_residual, aw_polynomial_for, coeff_a, coeff_a_sinh, Side};
use crate::quad::{residue_by_contour, QuadratureSpec};
use crate::repr::{
    adjoint_pair, casimir, casimir_scalar, f_eigenfunction, first_order_coeffs, first_order_ratio, gaussian_probes,
    h_eigenfunction, mu, pi_lambda, sample_points, twisted_primitive, AdjointElement, DifferenceOperator, Generator,
    Twist,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HYPEVAL_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    #[serde(default = "default_params")]
    pub params: Vec<ParamSet>,
    /// Tolerance overrides keyed by identity (the check id up to `#` or `@`).
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Replacement `x` points for the suites evaluated on window points.
    #[serde(default)]
    pub x_points: Option<Vec<ComplexJson>>,
    /// Replacement `λ` points, paired with `x_points`.
    #[serde(default)]
    pub lambda_points: Option<Vec<ComplexJson>>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_params() -> Vec<ParamSet> {
    let (pair, gamma) = crate::params::reference();
    vec![ParamSet::new(&pair, &gamma)]
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            params: default_params(),
            tolerances: BTreeMap::new(),
            x_points: None,
            lambda_points: None,
            quadrature: None,
            out: None,
            seed: 0,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Lists every configuration problem; evaluation only starts when empty.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !list_suites().iter().any(|s| s.id == self.suite) {
            out.push(format!("unknown suite {:?}", self.suite));
        }
        if self.params.is_empty() {
            out.push("parameter list is empty".to_string());
        }
        for (k, p) in self.params.iter().enumerate() {
            if let Err(e) = p.pair() {
                out.push(format!("params[{k}]: {e}"));
            }
            if p.gamma.iter().any(|g| !g.re.is_finite() || !g.im.is_finite()) {
                out.push(format!("params[{k}]: non-finite γ"));
            }
        }
        for (k, t) in &self.tolerances {
            if !(*t > 0.0) {
                out.push(format!("tolerance for {k:?} must be positive"));
            }
        }
        match (&self.x_points, &self.lambda_points) {
            (Some(x), Some(l)) if x.len() != l.len() || x.is_empty() => {
                out.push("x_points and lambda_points must be non-empty and of equal length".to_string())
            }
            (Some(_), None) | (None, Some(_)) => out.push("x_points and lambda_points go together".to_string()),
            _ => {}
        }
        if let Some(q) = &self.quadrature {
            if let Err(e) = q.validate() {
                out.push(e.to_string());
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p.join("; ")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub params: Value,
    /// `None` when the evaluation failed.
    pub residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Largest residual among the checks whose id starts with `prefix`.
    pub fn max_residual(&self, prefix: &str) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.id.starts_with(prefix))
            .map(|c| c.residual.unwrap_or(f64::INFINITY))
            .reduce(f64::max)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,residual,tol,pass,ms,error\n");
        for c in &self.checks {
            let r = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
            let e = c.error.as_deref().unwrap_or("").replace(',', ";");
            s.push_str(&format!("{},{},{:e},{},{:.3},{}\n", c.id, r, c.tol, c.pass, c.ms, e));
        }
        s
    }

    /// Writes the JSON report to `path` and the residual table next to it.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        std::fs::write(path.with_extension("csv"), self.to_csv())?;
        Ok(())
    }
}

type Residual = Box<dyn Fn() -> Result<f64> + Send + Sync>;

struct Check {
    id: String,
    anchor: &'static str,
    params: Value,
    tol: f64,
    run: Residual,
}

/// Identity key of a check id.
pub fn identity_of(id: &str) -> &str {
    id.split(['#', '@']).next().unwrap_or(id)
}

/// Builds a pool honouring `HYPEVAL_THREADS`.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

/// Runs every check of the configured suite. Evaluation errors become failed
/// checks; configuration errors abort before anything is evaluated.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let checks = build_checks(config)?;
    let known: Vec<&str> = checks.iter().map(|c| identity_of(&c.id)).collect();
    let unknown: Vec<&String> = config.tolerances.keys().filter(|k| !known.contains(&k.as_str())).collect();
    if !unknown.is_empty() {
        return Err(Error::Config(format!("tolerances name unknown identities: {unknown:?}")));
    }
    let pool = worker_pool()?;
    let records: Vec<CheckRecord> = pool.install(|| checks.par_iter().map(|c| run_check(c, config)).collect());
    let pass = records.iter().filter(|r| r.pass).count();
    let report = SuiteReport {
        suite: config.suite.clone(),
        summary: Summary { pass, fail: records.len() - pass },
        checks: records,
    };
    if let Some(out) = &config.out {
        report.write(out)?;
    }
    Ok(report)
}

fn run_check(c: &Check, config: &SuiteConfig) -> CheckRecord {
    let tol = config.tolerances.get(identity_of(&c.id)).copied().unwrap_or(c.tol);
    let t = Instant::now();
    let r = (c.run)();
    let ms = t.elapsed().as_secs_f64() * 1e3;
    let (residual, error) = match r {
        Ok(v) if v.is_finite() => (Some(v), None),
        Ok(v) => (None, Some(format!("non-finite residual {v}"))),
        Err(e) => (None, Some(e.to_string())),
    };
    CheckRecord {
        id: c.id.clone(),
        anchor: c.anchor.to_string(),
        params: c.params.clone(),
        residual,
        tol,
        pass: residual.is_some_and(|v| v <= tol),
        ms,
        error,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteInfo {
    pub id: String,
    pub anchors: Vec<String>,
    pub summary: String,
}

/// The static suite catalog.
pub fn list_suites() -> Vec<SuiteInfo> {
    let e = |id: &str, anchors: &[&str], summary: &str| SuiteInfo {
        id: id.to_string(),
        anchors: anchors.iter().map(|s| s.to_string()).collect(),
        summary: summary.to_string(),
    };
    vec![
        e("gamma", &[A_G_DIFF, A_G_REFL, A_G_SWAP, A_G_SCALE, A_G_CONJ, A_G_RES], "hyperbolic gamma identities on a strip grid"),
        e("representation", &[A_QG, A_CROSS, A_ACTION, A_CASIMIR], "modular double relations under π_λ"),
        e("eigen", &[A_EIG_H, A_EIG_F, A_FIRST], "twisted primitive eigenfunctions H and F"),
        e("adjoint", &[A_ADJ], "adjoint relation of the sesquilinear form"),
        e("radial", &[A_RADIAL], "second-order equation for ψ"),
        e("awpoly", &[A_AWPOLY, A_AFORMS], "Askey-Wilson polynomial eigen-equation"),
        e("diffeq", &[A_DIFFEQ], "the four Askey-Wilson equations of R and S"),
        e("duality", &[A_DUAL], "x ↔ λ duality of R, S and ψ"),
        e("symmetry", &[A_V, A_CHECK, A_D4, A_SWAP], "parameter symmetries and w1 ↔ w2 invariance"),
        e("reduction", &[A_RED], "R and S at λ_n against r_n"),
        e("main", &[A_MAIN], "R = S on a window grid"),
        e("casorati", &[A_CAS, A_CAS_T], "Casorati determinant of S and R"),
        e("asymptotics", &[A_GROWTH, A_PIECES], "growth of S and the five-interval split of ψ"),
    ]
}

const A_G_DIFF: &str = "G(z + iw1/2) = 2cosh(πz/w2) G(z − iw1/2), and w1 ↔ w2";
const A_G_REFL: &str = "G(z) G(−z) = 1";
const A_G_SWAP: &str = "G(w1, w2; z) = G(w2, w1; z)";
const A_G_SCALE: &str = "G(μw1, μw2; μz) = G(w1, w2; z)";
const A_G_CONJ: &str = "conj G(z) = G(−conj z)";
const A_G_RES: &str = "Res_{z=−iw} G = i√(w1w2)/(2π)";
const A_QG: &str = "KE = q²EK, KF = q⁻²FK, [E, F] = (K − K⁻¹)/(q − q⁻¹), and the tilde copy";
const A_CROSS: &str = "[X, X̃] = 0 for X ∈ {K, E, F}";
const A_ACTION: &str = "x̂ X x̂⁻¹ = (x̂·X), x̂ŷ = (x + y + iw)^";
const A_CASIMIR: &str = "π_λ(Ω) = −2cosh(2πλ/w2)";
const A_EIG_H: &str = "π_λ(Y_ρ) H = μ_τ(ρ) H, π_λ(Ỹ_ρ) H = μ̃_τ(ρ) H";
const A_EIG_F: &str = "π_λ̄(Y*_σ) F = −μ_ῡ(σ̄) F, and the tilde copy";
const A_FIRST: &str = "(q − q⁻¹)(π_λ(Y_ρ) − μ_τ(ρ)) f = l f − r f(· + iw1), l/r = cosh ratio";
const A_ADJ: &str = "⟨π_λ(X) f, g⟩ = ⟨f, π_λ̄(X*) g⟩";
const A_RADIAL: &str = "−2cosh(2πλ/w2) ψ(x) = B ψ(x + iw1) + C ψ(x) + D ψ(x − iw1)";
const A_AWPOLY: &str = "𝓛 r_n = v(λ_n) r_n";
const A_AFORMS: &str = "A(γ; x) product form = sinh/cosh form";
const A_DIFFEQ: &str = "𝓛 f = v f for f ∈ {R, S}, steps iw1, iw2, on the x and λ sides";
const A_DUAL: &str = "f(γ; x, λ) = f(γ̂; λ, x)";
const A_V: &str = "ψ and normalized S invariant under sign flips of ρ, σ, τ, υ";
const A_CHECK: &str = "ψ(γ; x, λ) = ψ(γ̌; −x, −λ)";
const A_D4: &str = "normalized R invariant under S₃ on γ1, γ2, γ3 and γ0 ↔ γ1";
const A_SWAP: &str = "R, S, ψ invariant under w1 ↔ w2";
const A_RED: &str = "R(γ; x, λ_n) = S(γ; x, λ_n) = r_n(x)";
const A_MAIN: &str = "R = S";
const A_CAS: &str = "S(z + iw1/2)R(z − iw1/2) − S(z − iw1/2)R(z + iw1/2) = 0";
const A_CAS_T: &str = "δ(z)/T(z) is iw1-periodic";
const A_GROWTH: &str = "log|S(x)| slope = α(|Im λ| − Re γ̂0 − w)";
const A_PIECES: &str = "ψ = ψ1 + ψ2 + ψ3 + ψ4 + ψ5";

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// `|a − b| / max(|a|, |b|, scale)`.
pub fn rel_scaled(a: Complex64, b: Complex64, scale: f64) -> f64 {
    let s = a.norm().max(b.norm()).max(scale);
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn cj(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn params_json(ps: &ParamSet, extra: &[(&str, Complex64)]) -> Value {
    let mut v = serde_json::to_value(ps).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        for (k, z) in extra {
            m.insert(k.to_string(), cj(*z));
        }
    }
    v
}

struct Builder<'a> {
    checks: Vec<Check>,
    suffix: String,
    ps: &'a ParamSet,
}

impl Builder<'_> {
    fn push<F>(&mut self, id: String, anchor: &'static str, extra: &[(&str, Complex64)], tol: f64, run: F)
    where
        F: Fn() -> Result<f64> + Send + Sync + 'static,
    {
        self.checks.push(Check {
            id: format!("{id}{}", self.suffix),
            anchor,
            params: params_json(self.ps, extra),
            tol,
            run: Box::new(run),
        });
    }
}

struct Env {
    pair: ModulusPair,
    gamma: GammaSet,
    ctx: Arc<HypContext>,
    seed: u64,
    points: Vec<EvalPoint>,
}

/// Points inside the corollary window, scaled by `w/6`.
fn window_points(pair: &ModulusPair) -> Vec<EvalPoint> {
    let l = pair.w / 6.0;
    [
        (c64(0.5, 0.0), c64(0.6, 0.0)),
        (c64(0.25, 0.0), c64(0.3, 0.0)),
        (c64(-0.4, 0.0), c64(0.7, 0.0)),
        (c64(0.6, 0.0), c64(-0.2, 0.0)),
        (c64(0.3, 0.1), c64(0.5, -0.1)),
    ]
    .iter()
    .map(|(x, y)| EvalPoint::new(x * l, y * l))
    .collect()
}

fn build_checks(config: &SuiteConfig) -> Result<Vec<Check>> {
    let mut all = Vec::new();
    let multi = config.params.len() > 1;
    for (k, ps) in config.params.iter().enumerate() {
        let pair = ps.pair()?;
        let gamma = ps.gamma();
        let ctx = match config.quadrature {
            Some(q) => HypContext::with_spec(pair, q)?,
            None => HypContext::new(pair),
        };
        let points = match (&config.x_points, &config.lambda_points) {
            (Some(x), Some(l)) => x.iter().zip(l).map(|(a, b)| EvalPoint::new((*a).into(), (*b).into())).collect(),
            _ => window_points(&pair),
        };
        let env = Env { pair, gamma, ctx: Arc::new(ctx), seed: config.seed, points };
        let mut b = Builder {
            checks: Vec::new(),
            suffix: if multi { format!("@{k}") } else { String::new() },
            ps,
        };
        match config.suite.as_str() {
            "gamma" => gamma_suite(&mut b, &env),
            "representation" => representation_suite(&mut b, &env),
            "eigen" => eigen_suite(&mut b, &env),
            "adjoint" => adjoint_suite(&mut b, &env),
            "radial" => radial_suite(&mut b, &env),
            "awpoly" => awpoly_suite(&mut b, &env),
            "diffeq" => diffeq_suite(&mut b, &env),
            "duality" => duality_suite(&mut b, &env),
            "symmetry" => symmetry_suite(&mut b, &env),
            "reduction" => reduction_suite(&mut b, &env),
            "main" => main_suite(&mut b, &env),
            "casorati" => casorati_suite(&mut b, &env),
            "asymptotics" => asymptotics_suite(&mut b, &env),
            s => return Err(Error::Config(format!("unknown suite {s:?}"))),
        }
        all.extend(b.checks);
    }
    Ok(all)
}

fn max_over<I, F>(items: I, f: F) -> Result<f64>
where
    I: IntoIterator,
    F: Fn(I::Item) -> Result<f64>,
{
    let mut m: f64 = 0.0;
    for it in items {
        m = m.max(f(it)?);
    }
    Ok(m)
}

fn strip_grid(pair: &ModulusPair) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(100);
    for i in 0..10 {
        for j in 0..10 {
            let re = -2.0 + 4.0 * i as f64 / 9.0;
            let im = pair.w * (-0.6 + 1.2 * j as f64 / 9.0);
            pts.push(c64(re, im));
        }
    }
    pts
}

fn gamma_suite(b: &mut Builder, env: &Env) {
    let pair = env.pair;
    let grid = Arc::new(strip_grid(&pair));
    let ctx = env.ctx.gamma.clone();
    for step in [Step::W1, Step::W2] {
        let (ctx, grid) = (ctx.clone(), grid.clone());
        let (h, per) = match step {
            Step::W1 => (pair.w1, pair.w2),
            Step::W2 => (pair.w2, pair.w1),
        };
        let name = if step == Step::W1 { "w1" } else { "w2" };
        b.push(format!("gamma/diffeq-{name}"), A_G_DIFF, &[], 1e-9, move || {
            max_over(grid.iter(), |&z| {
                let lhs = ctx.g(z + 0.5 * I * h)?;
                let rhs = 2.0 * (PI * z / per).cosh() * ctx.g(z - 0.5 * I * h)?;
                Ok(rel(lhs, rhs))
            })
        });
    }
    {
        let (ctx, grid) = (ctx.clone(), grid.clone());
        b.push("gamma/reflection".into(), A_G_REFL, &[], 1e-9, move || {
            max_over(grid.iter(), |&z| Ok((ctx.g(z)? * ctx.g(-z)? - 1.0).norm()))
        });
    }
    {
        let (ctx, grid) = (ctx.clone(), grid.clone());
        b.push("gamma/modular".into(), A_G_SWAP, &[], 1e-9, move || {
            let sw = ctx.swapped();
            max_over(grid.iter(), |&z| Ok(rel(ctx.g(z)?, sw.g(z)?)))
        });
    }
    for mu in [0.5, 2.0] {
        let (ctx, grid) = (ctx.clone(), grid.clone());
        b.push(format!("gamma/scaling-{mu}"), A_G_SCALE, &[], 1e-9, move || {
            let scaled = HypGammaContext::new(ModulusPair::new(mu * pair.w1, mu * pair.w2)?);
            max_over(grid.iter(), |&z| Ok(rel(ctx.g(z)?, scaled.g(mu * z)?)))
        });
    }
    {
        let (ctx, grid) = (ctx.clone(), grid.clone());
        b.push("gamma/conjugation".into(), A_G_CONJ, &[], 1e-9, move || {
            max_over(grid.iter(), |&z| Ok(rel(ctx.g(z)?.conj(), ctx.g(-z.conj())?)))
        });
    }
    let ctx = ctx.clone();
    b.push("gamma/residue".into(), A_G_RES, &[], 1e-6, move || {
        let r = 0.25 * pair.w1.min(pair.w2);
        let num = residue_by_contour(|z| ctx.g(z), -I * pair.w, r, &QuadratureSpec::default())?;
        let want = I * pair.sqrt_w1w2() / (2.0 * PI);
        Ok(rel(num, want))
    });
}

type Probes = Arc<Vec<(Complex64, FunctionHandle)>>;

fn op_residual(a: &DifferenceOperator, b: &DifferenceOperator, probes: &Probes, pts: &[Complex64]) -> Result<f64> {
    max_over(probes.iter(), |(_, f)| {
        max_over(pts.iter(), |&z| Ok(rel(a.apply(|u| f.eval(u), z)?, b.apply(|u| f.eval(u), z)?)))
    })
}

fn representation_suite(b: &mut Builder, env: &Env) {
    let pair = env.pair;
    let lam = c64(0.21, 0.05);
    let probes: Probes = Arc::new(gaussian_probes(5, env.seed));
    let pts = Arc::new(sample_points(20, env.seed + 1, 1.5, 0.3));
    let g = move |x| pi_lambda(x, lam, &pair);
    let mut add = |id: &str, anchor: &'static str, lhs: DifferenceOperator, rhs: DifferenceOperator| {
        let (p, z) = (probes.clone(), pts.clone());
        b.push(format!("representation/{id}"), anchor, &[("lambda", lam)], 1e-9, move || {
            op_residual(&lhs, &rhs, &p, &z)
        });
    };
    use Generator::*;
    for (tag, [k, ki, e, f], q) in [("", [K, KInv, E, F], pair.q), ("tilde-", [KTilde, KTildeInv, ETilde, FTilde], pair.qtilde)] {
        let (k, ki, e, f) = (g(k), g(ki), g(e), g(f));
        add(&format!("{tag}KE"), A_QG, k.compose(&e), e.compose(&k).scale(q * q));
        add(&format!("{tag}KF"), A_QG, k.compose(&f), f.compose(&k).scale(1.0 / (q * q)));
        add(
            &format!("{tag}EF"),
            A_QG,
            e.compose(&f).sub(&f.compose(&e)),
            k.sub(&ki).scale(1.0 / (q - 1.0 / q)),
        );
        add(&format!("{tag}KKinv"), A_QG, k.compose(&ki), DifferenceOperator::identity());
    }
    for (a, an) in [(K, "K"), (E, "E"), (F, "F")] {
        for (t, tn) in [(KTilde, "Kt"), (ETilde, "Et"), (FTilde, "Ft")] {
            add(&format!("cross-{an}{tn}"), A_CROSS, g(a).compose(&g(t)), g(t).compose(&g(a)));
        }
    }
    let y = c64(0.3, 0.1);
    let xh = g(XHat(y));
    let c2 = (2.0 * PI * (y + I * pair.w) / pair.w2).exp();
    let c1 = (2.0 * PI * (y + I * pair.w) / pair.w1).exp();
    for (gen, name, c) in [
        (K, "K", c64(1.0, 0.0)),
        (KTilde, "Kt", c64(1.0, 0.0)),
        (E, "E", c2),
        (F, "F", 1.0 / c2),
        (ETilde, "Et", c1),
        (FTilde, "Ft", 1.0 / c1),
    ] {
        add(&format!("action-{name}"), A_ACTION, xh.compose(&g(gen)), g(gen).compose(&xh).scale(c));
    }
    let y2 = c64(-0.2, 0.05);
    add("action-product", A_ACTION, xh.compose(&g(XHat(y2))), g(XHat(y + y2 + I * pair.w)));
    let s = casimir_scalar(lam, &pair);
    add("casimir", A_CASIMIR, casimir(lam, &pair), DifferenceOperator::scalar(s));
}

fn eigen_suite(b: &mut Builder, env: &Env) {
    let pair = env.pair;
    let [rho, sigma, tau, ups] = env.gamma.rstu();
    let lam = c64(0.3, 0.1);
    let pts = Arc::new(sample_points(50, env.seed + 2, 2.0, 0.3));
    let gctx = env.ctx.gamma.clone();
    let h = Arc::new(h_eigenfunction(&gctx, tau, rho, lam));
    let f = Arc::new(f_eigenfunction(&gctx, ups, sigma, lam));
    let extra = [("lambda", lam)];
    let eig = |op: DifferenceOperator, fun: Arc<FunctionHandle>, m: Complex64, pts: Arc<Vec<Complex64>>| {
        move || {
            max_over(pts.iter(), |&z| {
                let v = fun.eval(z)?;
                let scale = op.magnitude(|u| fun.eval(u), z)?.max(v.norm());
                Ok(rel_scaled(op.apply(|u| fun.eval(u), z)?, m * v, scale))
            })
        }
    };
    b.push(
        "eigen/H-Y".into(),
        A_EIG_H,
        &extra,
        1e-9,
        eig(twisted_primitive(rho, lam, &pair, Twist::Plain), h.clone(), mu(tau, rho, &pair), pts.clone()),
    );
    b.push(
        "eigen/H-Ytilde".into(),
        A_EIG_H,
        &extra,
        1e-9,
        eig(twisted_primitive(rho, lam, &pair, Twist::Tilde), h.clone(), mu(tau, rho, &pair.swap()), pts.clone()),
    );
    b.push(
        "eigen/F-Yadj".into(),
        A_EIG_F,
        &extra,
        1e-9,
        eig(
            twisted_primitive(sigma, lam.conj(), &pair, Twist::Adjoint),
            f.clone(),
            -mu(ups.conj(), sigma.conj(), &pair),
            pts.clone(),
        ),
    );
    b.push(
        "eigen/F-Yadj-tilde".into(),
        A_EIG_F,
        &extra,
        1e-9,
        eig(
            twisted_primitive(sigma, lam.conj(), &pair, Twist::AdjointTilde),
            f.clone(),
            -mu(ups.conj(), sigma.conj(), &pair.swap()),
            pts.clone(),
        ),
    );
    {
        let (h, pts) = (h.clone(), pts.clone());
        b.push("eigen/first-order-H".into(), A_FIRST, &extra, 1e-9, move || {
            let s = 0.5 * I * pair.w1;
            max_over(pts.iter(), |&z| {
                Ok(rel(h.eval(z + s)?, first_order_ratio(tau, rho, lam, &pair, z) * h.eval(z - s)?))
            })
        });
    }
    let probes: Probes = Arc::new(gaussian_probes(5, env.seed));
    b.push("eigen/first-order-form".into(), A_FIRST, &extra, 1e-9, move || {
        let y = twisted_primitive(rho, lam, &pair, Twist::Plain);
        let m = mu(tau, rho, &pair);
        let dq = pair.q - 1.0 / pair.q;
        let a = max_over(probes.iter(), |(_, f)| {
            max_over(pts.iter().take(20), |&z| {
                let lhs = dq * (y.apply(|u| f.eval(u), z)? - m * f.eval(z)?);
                let (l, r) = first_order_coeffs(tau, rho, lam, &pair, z);
                Ok(rel(lhs, l * f.eval(z)? - r * f.eval(z + I * pair.w1)?))
            })
        })?;
        let c = max_over(pts.iter(), |&z| {
            let (l, r) = first_order_coeffs(tau, rho, lam, &pair, z);
            Ok(rel(l / r, first_order_ratio(tau, rho, lam, &pair, z + 0.5 * I * pair.w1)))
        })?;
        Ok(a.max(c))
    });
}

fn adjoint_suite(b: &mut Builder, env: &Env) {
    let pair = env.pair;
    let lam = c64(0.2, 0.05);
    let probes: Probes = Arc::new(gaussian_probes(5, env.seed));
    let spec = env.ctx.spec;
    for x in AdjointElement::ALL {
        let p = probes.clone();
        b.push(format!("adjoint/{x:?}"), A_ADJ, &[("lambda", lam)], 1e-6, move || {
            max_over(0..p.len(), |i| {
                let (l, r) = adjoint_pair(x, lam, &pair, &p[i].1, &p[(i + 1) % p.len()].1, &spec)?;
                Ok(rel(l, r))
            })
        });
    }
}

fn radial_suite(b: &mut Builder, env: &Env) {
    let lam = c64(0.3, 0.1);
    for k in 0..10 {
        let x = c64(-2.0 + 0.45 * k as f64, 0.05 * ((k % 3) as f64 - 1.0));
        for (step, name) in [(Step::W1, "w1"), (Step::W2, "w2")] {
            let (ctx, g) = (env.ctx.clone(), env.gamma);
            b.push(format!("radial/{name}#{k}"), A_RADIAL, &[("x", x), ("lambda", lam)], 1e-6, move || {
                ctx.radial_residual(step, &g, EvalPoint::new(x, lam))
            });
        }
    }
}

fn awpoly_suite(b: &mut Builder, env: &Env) {
    let (pair, g) = (env.pair, env.gamma);
    let xs = Arc::new(sample_points(5, env.seed + 3, 1.5, 0.3));
    for n in 0..=4u32 {
        let xs = xs.clone();
        b.push(format!("awpoly/eigen-n{n}"), A_AWPOLY, &[], 1e-8, move || {
            max_over(xs.iter(), |&x| {
                let (lhs, rhs) = aw_eigen_residual(n, &g, &pair, x)?;
                let r = aw_polynomial_for(n, &g, &pair, x)?;
                Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(r.norm()))
            })
        });
    }
    let xs = Arc::new(sample_points(10, env.seed + 4, 1.5, 0.3));
    b.push("awpoly/a-forms".into(), A_AFORMS, &[], 1e-10, move || {
        max_over(xs.iter(), |&x| Ok(rel(coeff_a(&pair, &g, x)?, coeff_a_sinh(&pair, &g, x)?)))
    });
}

fn diffeq_suite(b: &mut Builder, env: &Env) {
    for (k, pt) in env.points.iter().enumerate() {
        for which in [Which::R, Which::S] {
            for (step, sn) in [(Step::W1, "w1"), (Step::W2, "w2")] {
                for (side, dn) in [(Side::X, "x"), (Side::Lambda, "lambda")] {
                    let (ctx, g, pt) = (env.ctx.clone(), env.gamma, *pt);
                    b.push(
                        format!("diffeq/{which:?}-{sn}-{dn}#{k}"),
                        A_DIFFEQ,
                        &[("x", pt.x), ("lambda", pt.lambda)],
                        1e-6,
                        move || ctx.aw_residual(which, step, side, &g, pt),
                    );
                }
            }
        }
    }
}

fn duality_suite(b: &mut Builder, env: &Env) {
    for (k, pt) in env.points.iter().take(2).enumerate() {
        let extra = [("x", pt.x), ("lambda", pt.lambda)];
        for which in [Which::R, Which::S] {
            let (ctx, g, pt) = (env.ctx.clone(), env.gamma, *pt);
            b.push(format!("duality/{which:?}#{k}"), A_DUAL, &extra, 1e-7, move || {
                Ok(rel(ctx.value(which, &g, pt.x, pt.lambda)?, ctx.value(which, &g.dual(), pt.lambda, pt.x)?))
            });
        }
        let (ctx, g, pt) = (env.ctx.clone(), env.gamma, *pt);
        b.push(format!("duality/psi#{k}"), A_DUAL, &extra, 1e-7, move || {
            Ok(rel(ctx.psi(&g, pt)?.value, ctx.psi(&g.dual(), pt.dual())?.value))
        });
    }
}

fn symmetry_suite(b: &mut Builder, env: &Env) {
    let pt = env.points[0];
    let extra = [("x", pt.x), ("lambda", pt.lambda)];
    let g = env.gamma;
    for mask in 1..16u8 {
        let ctx = env.ctx.clone();
        b.push(format!("symmetry/psi-V#{mask}"), A_V, &extra, 1e-7, move || {
            Ok(rel(ctx.psi(&g, pt)?.value, ctx.psi(&g.flip_rstu(mask), pt)?.value))
        });
        let ctx = env.ctx.clone();
        b.push(format!("symmetry/S-V#{mask}"), A_V, &extra, 1e-6, move || {
            Ok(rel(ctx.normalized_form(Which::S, &g, pt)?, ctx.normalized_form(Which::S, &g.flip_rstu(mask), pt)?))
        });
    }
    let ctx = env.ctx.clone();
    b.push("symmetry/psi-check".into(), A_CHECK, &extra, 1e-7, move || {
        Ok(rel(ctx.psi(&g, pt)?.value, ctx.psi(&g.check(), EvalPoint::new(-pt.x, -pt.lambda))?.value))
    });
    for (perm, name) in [([0, 2, 1, 3], "S3-12"), ([0, 1, 3, 2], "S3-23"), ([1, 0, 2, 3], "D4-01")] {
        let ctx = env.ctx.clone();
        b.push(format!("symmetry/R-{name}"), A_D4, &extra, 1e-6, move || {
            Ok(rel(ctx.normalized_form(Which::R, &g, pt)?, ctx.normalized_form(Which::R, &g.permute(perm), pt)?))
        });
    }
    for (name, which) in [("R", Some(Which::R)), ("S", Some(Which::S)), ("psi", None)] {
        let ctx = env.ctx.clone();
        b.push(format!("symmetry/swap-{name}"), A_SWAP, &extra, 1e-7, move || {
            let sw = ctx.swapped();
            match which {
                Some(w) => Ok(rel(ctx.value(w, &g, pt.x, pt.lambda)?, sw.value(w, &g, pt.x, pt.lambda)?)),
                None => Ok(rel(ctx.psi(&g, pt)?.value, sw.psi(&g, pt)?.value)),
            }
        });
    }
}

fn reduction_suite(b: &mut Builder, env: &Env) {
    let (pair, g) = (env.pair, env.gamma);
    for n in 0..=2u32 {
        let lam = lambda_n(n, &g, &pair);
        for k in 0..10 {
            let x = c64(-1.2 + 0.27 * k as f64, 0.1 * ((k % 3) as f64 - 1.0));
            for which in [Which::R, Which::S] {
                let ctx = env.ctx.clone();
                let tol = if n == 0 { 1e-7 } else { 1e-6 };
                b.push(format!("reduction/{which:?}-n{n}#{k}"), A_RED, &[("x", x), ("lambda", lam)], tol, move || {
                    let v = ctx.value(which, &g, x, lam)?;
                    let r = aw_polynomial_for(n, &g, &pair, x)?;
                    Ok((v - r).norm() / r.norm())
                });
            }
        }
    }
}

fn main_suite(b: &mut Builder, env: &Env) {
    let l = env.pair.w / 6.0;
    let g0 = env.gamma;
    let g1 = GammaSet::new([g0.g[0] * 1.5, g0.g[1] * 0.5, g0.g[2] * 1.2, g0.g[3] * 0.8]);
    let mut k = 0;
    for g in [g0, g1] {
        for xs in [0.2, 0.45, 0.7] {
            for ls in [0.3, 0.55, 0.8] {
                let pt = EvalPoint::new(c64(xs * l, 0.0), c64(ls * l, 0.0));
                let ctx = env.ctx.clone();
                let extra = [
                    ("x", pt.x),
                    ("lambda", pt.lambda),
                    ("g0", g.g[0]),
                    ("g1", g.g[1]),
                    ("g2", g.g[2]),
                    ("g3", g.g[3]),
                ];
                b.push(format!("main/R=S#{k}"), A_MAIN, &extra, 1e-6, move || ctx.verify_r_equals_s(&g, pt));
                k += 1;
            }
        }
    }
}

fn casorati_suite(b: &mut Builder, env: &Env) {
    let l = env.pair.w / 6.0;
    let lam = c64(0.6 * l, 0.0);
    let g = env.gamma;
    let w1 = env.pair.w1;
    for (k, zs) in [-0.6, -0.3, 0.0, 0.3, 0.6].iter().enumerate() {
        let z = c64(zs * l, 0.0);
        let ctx = env.ctx.clone();
        b.push(format!("casorati/delta#{k}"), A_CAS, &[("z", z), ("lambda", lam)], 1e-6, move || {
            let (d, s) = ctx.casorati(&g, z, lam)?;
            Ok(d.norm() / s)
        });
    }
    let z = c64(0.3 * l, 0.0);
    let ctx = env.ctx.clone();
    b.push("casorati/periodic".into(), A_CAS_T, &[("z", z), ("lambda", lam)], 1e-6, move || {
        let (d0, s0) = ctx.casorati(&g, z, lam)?;
        let (d1, s1) = ctx.casorati(&g, z + I * w1, lam)?;
        let (t0, t1) = (ctx.casorati_t(&g, z)?, ctx.casorati_t(&g, z + I * w1)?);
        Ok((d1 / t1 - d0 / t0).norm() / (s0 / t0.norm() + s1 / t1.norm()))
    });
}

fn asymptotics_suite(b: &mut Builder, env: &Env) {
    let lam = c64(0.1, 0.2);
    let g = env.gamma;
    for which in [Which::S, Which::R] {
        let ctx = env.ctx.clone();
        b.push(format!("asymptotics/growth-{which:?}"), A_GROWTH, &[("lambda", lam)], 0.05, move || {
            Ok(ctx.growth_estimate(which, &g, lam)?.relative_error())
        });
    }
    let ctx = env.ctx.clone();
    let lam2 = c64(0.1, 0.4);
    b.push("asymptotics/growth-doubling".into(), A_GROWTH, &[("lambda", lam), ("lambda2", lam2)], 0.05, move || {
        let a = ctx.growth_estimate(Which::S, &g, lam)?.slope;
        let c = ctx.growth_estimate(Which::S, &g, lam2)?.slope;
        let want = ctx.pair().alpha * (lam2.im - lam.im);
        Ok(((c - a) / want - 1.0).abs())
    });
    let x = c64(4.0 * env.pair.w, 0.0);
    let ctx = env.ctx.clone();
    b.push("asymptotics/pieces".into(), A_PIECES, &[("x", x), ("lambda", lam)], 1e-8, move || {
        let pt = EvalPoint::new(x, lam);
        let pieces = ctx.psi_pieces(&g, pt)?;
        Ok(rel(pieces.iter().sum(), ctx.psi(&g, pt)?.value))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFunction {
    G,
    R,
    S,
    Psi,
    Rn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridVar {
    X,
    Lambda,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub function: GridFunction,
    pub var: GridVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Imaginary part of every axis point.
    #[serde(default)]
    pub im: f64,
    pub params: ParamSet,
    pub x: ComplexJson,
    pub lambda: ComplexJson,
    #[serde(default)]
    pub n: u32,
}

struct Row {
    value: Option<(Complex64, f64)>,
    error: Option<String>,
}

/// Writes `axis,re,im,abs,err,error` rows; failed points keep their row with
/// the error message.
pub fn emit_grid<W: Write>(spec: &GridSpec, out: &mut W) -> Result<()> {
    if spec.steps < 2 || !(spec.from.is_finite() && spec.to.is_finite()) {
        return Err(Error::Config("a grid needs finite bounds and at least two steps".into()));
    }
    let pair = spec.params.pair()?;
    let gamma = spec.params.gamma();
    let ctx = HypContext::new(pair);
    let axis: Vec<f64> = (0..spec.steps)
        .map(|k| spec.from + (spec.to - spec.from) * k as f64 / (spec.steps - 1) as f64)
        .collect();
    let eval = |t: f64| -> Result<(Complex64, f64)> {
        let a = c64(t, spec.im);
        let (x, lam) = match spec.var {
            GridVar::X => (a, spec.lambda.into()),
            GridVar::Lambda => (spec.x.into(), a),
        };
        match spec.function {
            GridFunction::G => Ok((ctx.gamma.g(a)?, 0.0)),
            GridFunction::Rn => Ok((aw_polynomial_for(spec.n, &gamma, &pair, a)?, 0.0)),
            GridFunction::Psi => {
                let r = ctx.psi_continued(&gamma, EvalPoint::new(x, lam))?;
                Ok((r.value, r.error()))
            }
            GridFunction::R | GridFunction::S => {
                let w = if spec.function == GridFunction::R { Which::R } else { Which::S };
                let r = ctx.eval(w, &gamma, EvalPoint::new(x, lam))?;
                Ok((r.value, r.error()))
            }
        }
    };
    let pool = worker_pool()?;
    let rows: Vec<Row> = pool.install(|| {
        axis.par_iter()
            .map(|&t| match eval(t) {
                Ok(v) => Row { value: Some(v), error: None },
                Err(e) => Row { value: None, error: Some(e.to_string().replace(',', ";")) },
            })
            .collect()
    });
    writeln!(out, "axis,re,im,abs,err,error")?;
    for (t, row) in axis.iter().zip(rows) {
        match (row.value, row.error) {
            (Some((v, e)), _) => writeln!(out, "{t},{:e},{:e},{:e},{:e},", v.re, v.im, v.norm(), e)?,
            (None, Some(msg)) => writeln!(out, "{t},,,,,{msg}")?,
            (None, None) => unreachable!(),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog() {
        let cat = list_suites();
        for id in ["gamma", "representation", "awpoly", "duality", "symmetry", "radial", "casorati", "main"] {
            assert!(cat.iter().any(|s| s.id == id), "{id}");
        }
        assert!(cat.iter().all(|s| !s.anchors.is_empty()));
        let text = serde_json::to_string(&cat).unwrap();
        let back: Vec<SuiteInfo> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cat);
    }

    #[test]
    fn empty_params_rejected() {
        let mut c = SuiteConfig::new("gamma");
        c.params.clear();
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
        let c = SuiteConfig::new("nope");
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_tolerance_key_rejected() {
        let mut c = SuiteConfig::new("awpoly");
        c.tolerances.insert("awpoly/bogus".into(), 1e-3);
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    }

    #[test]
    fn identity_keys() {
        assert_eq!(identity_of("radial/w1#3"), "radial/w1");
        assert_eq!(identity_of("main/R=S#2@1"), "main/R=S");
        assert_eq!(identity_of("gamma/residue"), "gamma/residue");
    }

    #[test]
    fn awpoly_suite_passes() {
        let r = run_suite(&SuiteConfig::new("awpoly")).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures());
        assert_eq!(r.summary.pass, 6);
    }
}

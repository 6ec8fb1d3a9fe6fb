use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use hypeval::error::{Error, Result};
use hypeval::gamma::{HypGammaContext, Step};
use hypeval::hypfun::{EvalPoint, HypContext, HypEvalResult, Which};
use hypeval::params::{lambda_n, parse_complex, ComplexJson, GammaSet, ModulusPair, ParamSet};
use hypeval::qseries::{aw_eigen_residual, aw_polynomial_for, coeff_a, coeff_a_sinh, AWOperatorSpec, Side};
use hypeval::quad::QuadratureSpec;
use hypeval::repr::{f_eigenfunction, h_eigenfunction, mu, pi_lambda, twisted_primitive, Generator, Twist};
use hypeval::verify::{emit_grid, list_suites, run_suite, GridFunction, GridSpec, GridVar, SuiteConfig};

#[derive(Parser)]
#[command(name = "hypeval", version, about = "Evaluate hyperbolic special functions and check their identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Pair {
    #[arg(long, default_value_t = 1.0)]
    w1: f64,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    w2: f64,
}

impl Pair {
    fn pair(&self) -> Result<ModulusPair> {
        ModulusPair::new(self.w1, self.w2)
    }
}

#[derive(Args, Clone)]
struct Params {
    #[command(flatten)]
    pair: Pair,
    /// Four couplings: `g0,g1,g2,g3` (real) or `re,im;re,im;re,im;re,im`.
    #[arg(long, default_value = "0.05,0.04,0.03,0.02", allow_hyphen_values = true)]
    gamma: String,
}

impl Params {
    fn gamma(&self) -> Result<GammaSet> {
        parse_gamma(&self.gamma)
    }
}

fn parse_gamma(s: &str) -> Result<GammaSet> {
    let parts: Vec<Complex64> = if s.contains(';') {
        s.split(';').map(parse_complex).collect::<Result<_>>()?
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map(|v| Complex64::new(v, 0.0)))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("cannot parse γ from {s:?}")))?
    };
    let g: [Complex64; 4] = parts
        .try_into()
        .map_err(|_| Error::Config(format!("γ needs four entries, got {s:?}")))?;
    Ok(GammaSet::new(g))
}

fn cx(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Args, Clone)]
struct Point {
    #[arg(long, value_parser = cx, default_value = "0.1", allow_hyphen_values = true)]
    x: Complex64,
    #[arg(long, value_parser = cx, default_value = "0.12", allow_hyphen_values = true)]
    lambda: Complex64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StepArg {
    W1,
    W2,
}

impl From<StepArg> for Step {
    fn from(s: StepArg) -> Step {
        match s {
            StepArg::W1 => Step::W1,
            StepArg::W2 => Step::W2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Lambda,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    R,
    S,
}

#[derive(Clone, Copy, ValueEnum)]
enum EigenKind {
    H,
    F,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFn {
    G,
    R,
    S,
    Psi,
    Rn,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hyperbolic gamma function G(z).
    G {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Apply π_λ of a generator to e^{−(z−c)²} at z.
    Rep {
        #[command(flatten)]
        pair: Pair,
        /// K, Kinv, E, F, Kt, Ktinv, Et, Ft or xhat:<re,im>.
        #[arg(long)]
        gen: String,
        #[arg(long, value_parser = cx, default_value = "0.12", allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, value_parser = cx, default_value = "0", allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_parser = cx, default_value = "0", allow_hyphen_values = true)]
        center: Complex64,
    },
    /// Eigen-residual of H under Y_ρ or of F under the adjoint twist.
    Eigen {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "h")]
        kind: EigenKind,
        #[arg(long, value_parser = cx, default_value = "0.3,0.1", allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, value_parser = cx, default_value = "0.2,0.1", allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long)]
        tilde: bool,
    },
    /// Askey-Wilson polynomial r_n(x) and its eigen-residual.
    Awpoly {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        x: Complex64,
    },
    /// Askey-Wilson operator residual of R or S.
    Awop {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "s")]
        which: WhichArg,
        #[arg(long, value_enum, default_value = "w1")]
        step: StepArg,
        #[arg(long, value_enum, default_value = "x")]
        side: SideArg,
    },
    /// Ruijsenaars' R function.
    R(EvalArgs),
    /// The matrix coefficient ψ.
    Psi(EvalArgs),
    /// The renormalised matrix coefficient S.
    S(EvalArgs),
    /// Evaluate along a line and print CSV.
    Grid {
        #[command(flatten)]
        params: Params,
        #[arg(long = "fn", value_enum)]
        function: GridFn,
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the verification suites.
    ListSuites {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    point: Point,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn cj(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn eval_json(r: &HypEvalResult) -> Value {
    json!({
        "value": cj(r.value),
        "err": r.quadrature.error_estimate,
        "contour": r.contour_used.vertices.iter().map(|v| cj(*v)).collect::<Vec<_>>(),
        "panels": r.quadrature.panels_used,
    })
}

fn eval_cmd(args: &EvalArgs, f: impl Fn(&HypContext, &GammaSet, EvalPoint) -> Result<HypEvalResult>) -> Result<Value> {
    let pair = args.params.pair.pair()?;
    let mut spec = QuadratureSpec::default();
    if let Some(t) = args.tol {
        spec.abs_tol = t;
        spec.rel_tol = t;
    }
    let ctx = HypContext::with_spec(pair, spec)?;
    let r = f(&ctx, &args.params.gamma()?, EvalPoint::new(args.point.x, args.point.lambda))?;
    Ok(eval_json(&r))
}

fn parse_gen(s: &str) -> Result<Generator> {
    match s.strip_prefix("xhat:") {
        Some(rest) => Ok(Generator::XHat(parse_complex(rest)?)),
        None => Generator::parse(s),
    }
}

fn run(cmd: Cmd) -> Result<(Option<Value>, bool)> {
    let out = match cmd {
        Cmd::G { pair, z } => {
            let ctx = HypGammaContext::new(pair.pair()?);
            let d = ctx.eval_detailed(z, None)?;
            json!({"value": cj(d.value), "steps": d.steps, "pole_distance": d.pole_distance})
        }
        Cmd::Rep { pair, gen, lambda, z, center } => {
            let p = pair.pair()?;
            let op = pi_lambda(parse_gen(&gen)?, lambda, &p);
            let f = |u: Complex64| Ok((-(u - center) * (u - center)).exp());
            let v = op.apply(f, z)?;
            json!({"value": cj(v), "shifts": op.shifts().into_iter().map(cj).collect::<Vec<_>>()})
        }
        Cmd::Eigen { params, kind, lambda, z, tilde } => {
            let p = params.pair.pair()?;
            let [rho, sigma, tau, ups] = params.gamma()?.rstu();
            let ctx = Arc::new(HypGammaContext::new(p));
            let pp = if tilde { p.swap() } else { p };
            let (h, op, m) = match kind {
                EigenKind::H => (
                    h_eigenfunction(&ctx, tau, rho, lambda),
                    twisted_primitive(rho, lambda, &p, if tilde { Twist::Tilde } else { Twist::Plain }),
                    mu(tau, rho, &pp),
                ),
                EigenKind::F => (
                    f_eigenfunction(&ctx, ups, sigma, lambda),
                    twisted_primitive(sigma, lambda.conj(), &p, if tilde { Twist::AdjointTilde } else { Twist::Adjoint }),
                    -mu(ups.conj(), sigma.conj(), &pp),
                ),
            };
            let lhs = op.apply(|u| h.eval(u), z)?;
            let rhs = m * h.eval(z)?;
            let scale = op.magnitude(|u| h.eval(u), z)?.max(rhs.norm());
            json!({"lhs": cj(lhs), "eigenvalue": cj(m), "residual": (lhs - rhs).norm() / scale})
        }
        Cmd::Awpoly { params, n, x } => {
            let p = params.pair.pair()?;
            let g = params.gamma()?;
            let v = aw_polynomial_for(n, &g, &p, x)?;
            let (l, r) = aw_eigen_residual(n, &g, &p, x)?;
            json!({"value": cj(v), "lambda_n": cj(lambda_n(n, &g, &p)), "residual": (l - r).norm() / l.norm().max(r.norm()).max(v.norm())})
        }
        Cmd::Awop { params, point, which, step, side } => {
            let p = params.pair.pair()?;
            let g = params.gamma()?;
            let ctx = HypContext::new(p);
            let which = match which {
                WhichArg::R => Which::R,
                WhichArg::S => Which::S,
            };
            let side = match side {
                SideArg::X => Side::X,
                SideArg::Lambda => Side::Lambda,
            };
            let pt = EvalPoint::new(point.x, point.lambda);
            let res = ctx.aw_residual(which, step.into(), side, &g, pt)?;
            let (og, at, other) = match side {
                Side::X => (g, pt.x, pt.lambda),
                Side::Lambda => (g.dual(), pt.lambda, pt.x),
            };
            let spec = AWOperatorSpec { gamma: og, pair: p, step: step.into() };
            let oriented = if matches!(step, StepArg::W1) { p } else { p.swap() };
            json!({
                "residual": res,
                "eigenvalue": cj(spec.eigenvalue(other)),
                "A": cj(coeff_a(&oriented, &og, at)?),
                "A_sinh": cj(coeff_a_sinh(&oriented, &og, at)?),
            })
        }
        Cmd::R(a) => eval_cmd(&a, |c, g, pt| c.r_function(g, pt))?,
        Cmd::Psi(a) => eval_cmd(&a, |c, g, pt| c.psi_continued(g, pt))?,
        Cmd::S(a) => eval_cmd(&a, |c, g, pt| c.s_function(g, pt))?,
        Cmd::Grid { params, function, var, from, to, steps, im, point, n, out } => {
            let var = match var.as_str() {
                "x" | "z" => GridVar::X,
                "lambda" => GridVar::Lambda,
                v => return Err(Error::Config(format!("unknown grid variable {v:?}"))),
            };
            let spec = GridSpec {
                function: match function {
                    GridFn::G => GridFunction::G,
                    GridFn::R => GridFunction::R,
                    GridFn::S => GridFunction::S,
                    GridFn::Psi => GridFunction::Psi,
                    GridFn::Rn => GridFunction::Rn,
                },
                var,
                from,
                to,
                steps,
                im,
                params: ParamSet::new(&params.pair.pair()?, &params.gamma()?),
                x: ComplexJson::from(point.x),
                lambda: ComplexJson::from(point.lambda),
                n,
            };
            match out {
                Some(path) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                    emit_grid(&spec, &mut f)?;
                    f.flush()?;
                }
                None => match emit_grid(&spec, &mut std::io::stdout().lock()) {
                    Err(Error::Io(e)) if e.contains("Broken pipe") => {}
                    r => r?,
                },
            }
            return Ok((None, true));
        }
        Cmd::Verify { suite, config, out } => {
            let mut cfg = match (&config, &suite) {
                (Some(path), _) => SuiteConfig::from_json_file(path)?,
                (None, Some(s)) => SuiteConfig::new(s),
                (None, None) => return Err(Error::Config("verify needs --suite or --config".into())),
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let report = run_suite(&cfg)?;
            for c in &report.checks {
                let r = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "error".into());
                eprintln!("{} {:<32} {:>10} <= {:.0e}", if c.pass { "PASS" } else { "FAIL" }, c.id, r, c.tol);
            }
            eprintln!("{}: {} passed, {} failed", report.suite, report.summary.pass, report.summary.fail);
            let ok = report.all_passed();
            if cfg.out.is_some() {
                return Ok((None, ok));
            }
            return Ok((Some(serde_json::to_value(&report)?), ok));
        }
        Cmd::ListSuites { json } => {
            let cat = list_suites();
            if json {
                serde_json::to_value(&cat)?
            } else {
                let mut text = String::new();
                for s in &cat {
                    text.push_str(&format!("{:<15} {}\n", s.id, s.summary));
                    for a in &s.anchors {
                        text.push_str(&format!("{:<15}   {}\n", "", a));
                    }
                }
                emit(&text);
                return Ok((None, true));
            }
        }
    };
    Ok((Some(out), true))
}

/// Writes to stdout, treating a closed pipe as the reader being done.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((value, ok)) => {
            if let Some(v) = value {
                emit(&format!("{}\n", serde_json::to_string_pretty(&v).unwrap_or_default()));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

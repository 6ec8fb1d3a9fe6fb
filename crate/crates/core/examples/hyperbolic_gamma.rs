//! Values of the hyperbolic gamma function and the identities it satisfies.

use std::f64::consts::PI;

use hypeval::gamma::{HypGammaContext, LatticeKind};
use hypeval::params::{c64, ModulusPair, I};
use hypeval::quad::{residue_by_contour, QuadratureSpec};

fn main() -> hypeval::error::Result<()> {
    let pair = ModulusPair::new(1.0, 2f64.sqrt())?;
    let ctx = HypGammaContext::new(pair);

    for z in [c64(0.0, 0.0), c64(0.3, 0.2), c64(-1.5, 0.4), c64(0.2, 2.7)] {
        println!("G({z}) = {}", ctx.g(z)?);
    }

    let z = c64(0.4, -0.1);
    let lhs = ctx.g(z + 0.5 * I * pair.w1)?;
    let rhs = 2.0 * (PI * z / pair.w2).cosh() * ctx.g(z - 0.5 * I * pair.w1)?;
    println!("difference equation residual: {:.2e}", (lhs - rhs).norm() / lhs.norm());
    println!("reflection G(z)G(-z) - 1: {:.2e}", (ctx.g(z)? * ctx.g(-z)? - 1.0).norm());

    let res = residue_by_contour(|u| ctx.g(u), -I * pair.w, 0.25, &QuadratureSpec::default())?;
    println!("residue at -iw: {res} (closed form {})", ctx.residue_minus_iw());

    for p in ctx.pole_zero_lattice(LatticeKind::Zeros, 2).iter().take(3) {
        println!("zero ({}, {}) at {}", p.m, p.n, p.point);
    }
    Ok(())
}

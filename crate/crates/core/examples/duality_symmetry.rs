//! Duality x ↔ λ, sign-flip invariance of ψ and the w1 ↔ w2 symmetry.

use hypeval::hypfun::{EvalPoint, HypContext, Which};
use hypeval::params::{c64, reference};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    let pt = EvalPoint::new(c64(0.1, 0.0), c64(0.12, 0.0));
    let rel = |a: num_complex::Complex64, b: num_complex::Complex64| (a - b).norm() / a.norm();

    for which in [Which::R, Which::S] {
        let a = ctx.value(which, &gamma, pt.x, pt.lambda)?;
        let b = ctx.value(which, &gamma.dual(), pt.lambda, pt.x)?;
        println!("{which:?} duality: {:.1e}", rel(a, b));
        let c = ctx.swapped().value(which, &gamma, pt.x, pt.lambda)?;
        println!("{which:?} under w1 <-> w2: {:.1e}", rel(a, c));
    }

    let psi = ctx.psi(&gamma, pt)?.value;
    for mask in [1u8, 6, 15] {
        let flipped = ctx.psi(&gamma.flip_rstu(mask), pt)?.value;
        println!("ψ with sign mask {mask:04b}: {:.1e}", rel(psi, flipped));
    }
    let mirrored = ctx.psi(&gamma.check(), EvalPoint::new(-pt.x, -pt.lambda))?.value;
    println!("ψ(γ̌; -x, -λ): {:.1e}", rel(psi, mirrored));

    let n0 = ctx.normalized_form(Which::R, &gamma, pt)?;
    let n1 = ctx.normalized_form(Which::R, &gamma.permute([1, 0, 3, 2]), pt)?;
    println!("normalized R under γ0<->γ1, γ2<->γ3: {:.1e}", rel(n0, n1));
    Ok(())
}

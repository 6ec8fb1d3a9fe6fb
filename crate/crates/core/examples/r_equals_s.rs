//! Ruijsenaars' R from its Barnes-type integral and S from the matrix
//! coefficient ψ, compared at a few points.

use hypeval::hypfun::{EvalPoint, HypContext};
use hypeval::params::{c64, reference};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    for (x, lam) in [(0.1, 0.12), (0.05, 0.15), (0.18, 0.02)] {
        let pt = EvalPoint::new(c64(x, 0.0), c64(lam, 0.0));
        let r = ctx.r_function(&gamma, pt)?;
        let s = ctx.s_function(&gamma, pt)?;
        println!(
            "x = {x}, λ = {lam}: R = {:.12}  S = {:.12}  |R-S|/(|R|+|S|) = {:.1e}  (R contour has {} vertices)",
            r.value,
            s.value,
            ctx.verify_r_equals_s(&gamma, pt)?,
            r.contour_used.vertices.len()
        );
    }
    let psi = ctx.psi(&gamma, EvalPoint::new(c64(0.1, 0.0), c64(0.12, 0.0)))?;
    println!("ψ = {} with error estimate {:.1e}", psi.value, psi.error());
    Ok(())
}

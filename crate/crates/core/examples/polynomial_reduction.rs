//! At λ = λ_n both R and S collapse to the Askey-Wilson polynomial r_n.

use hypeval::hypfun::{HypContext, Which};
use hypeval::params::{c64, lambda_n, reference};
use hypeval::qseries::aw_polynomial_for;

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    for n in 0..3 {
        let lam = lambda_n(n, &gamma, &pair);
        for x in [c64(0.1, 0.0), c64(-0.7, 0.2)] {
            let rn = aw_polynomial_for(n, &gamma, &pair, x)?;
            let r = ctx.value(Which::R, &gamma, x, lam)?;
            let s = ctx.value(Which::S, &gamma, x, lam)?;
            println!("n = {n}, x = {x}: r_n = {rn:.10}  R = {r:.10}  S = {s:.10}");
        }
    }
    // Close to, but not at, λ_n the integrals pinch and are refused.
    let near = lambda_n(1, &gamma, &pair) + c64(1e-5, 0.0);
    println!("near λ_1: {:?}", ctx.value(Which::S, &gamma, c64(0.1, 0.0), near).err());
    Ok(())
}

//! Exponential decay of S for large x and the five-interval split of ψ.

use hypeval::hypfun::{EvalPoint, HypContext, Which};
use hypeval::params::{c64, reference};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    let lam = c64(0.1, 0.2);

    let fit = ctx.growth_estimate(Which::S, &gamma, lam)?;
    println!("fitted slope {:.6}, predicted {:.6}, relative error {:.1e}", fit.slope, fit.predicted, fit.relative_error());

    let pt = EvalPoint::new(c64(4.0 * pair.w, 0.0), lam);
    let pieces = ctx.psi_pieces(&gamma, pt)?;
    let whole = ctx.psi(&gamma, pt)?.value;
    for (k, p) in pieces.iter().enumerate() {
        println!("ψ{} = {:.3e}", k + 1, p);
    }
    let sum: num_complex::Complex64 = pieces.iter().sum();
    println!("sum {sum:.6e} vs ψ {whole:.6e}");
    Ok(())
}

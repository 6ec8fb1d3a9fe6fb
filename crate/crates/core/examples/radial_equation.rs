//! ψ solves the second-order equation coming from the radial part of the
//! Casimir element, in both step directions.

use hypeval::gamma::Step;
use hypeval::hypfun::{EvalPoint, HypContext};
use hypeval::params::{c64, reference};
use hypeval::repr::radial_coeffs;

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    let lam = c64(0.3, 0.1);
    for x in [c64(0.1, 0.0), c64(-1.2, 0.05), c64(2.0, -0.05)] {
        let (b, c, d) = radial_coeffs(&gamma, &pair, x)?;
        println!("x = {x}: B = {b:.4}, C = {c:.4}, D = {d:.4}");
        for step in [Step::W1, Step::W2] {
            println!("  {step:?} residual {:.1e}", ctx.radial_residual(step, &gamma, EvalPoint::new(x, lam))?);
        }
    }
    Ok(())
}

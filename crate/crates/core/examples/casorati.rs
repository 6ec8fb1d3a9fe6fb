//! The Casorati determinant of S and R in the iw1 direction vanishes.

use hypeval::hypfun::HypContext;
use hypeval::params::{c64, reference};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let ctx = HypContext::new(pair);
    let lam = c64(0.12, 0.0);
    for z in [c64(-0.1, 0.0), c64(0.05, 0.0), c64(0.15, 0.02)] {
        let (d, scale) = ctx.casorati(&gamma, z, lam)?;
        println!("z = {z}: |δ| = {:.2e}, scale {:.2e}, T(z) = {:.4}", d.norm(), scale, ctx.casorati_t(&gamma, z)?);
    }
    Ok(())
}

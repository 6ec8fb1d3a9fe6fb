//! The eigenfunctions H and F of the twisted primitive elements and the
//! first-order equation behind them.

use std::sync::Arc;

use hypeval::gamma::HypGammaContext;
use hypeval::params::{c64, ModulusPair, I};
use hypeval::repr::{f_eigenfunction, first_order_ratio, h_eigenfunction, mu, twisted_primitive, Twist};

fn main() -> hypeval::error::Result<()> {
    let pair = ModulusPair::new(1.0, 2f64.sqrt())?;
    let ctx = Arc::new(HypGammaContext::new(pair));
    let (rho, sigma, tau, ups) = (c64(0.07, -0.01), c64(0.05, 0.0), c64(0.11, 0.02), c64(-0.03, 0.01));
    let lam = c64(0.3, 0.1);

    let h = h_eigenfunction(&ctx, tau, rho, lam);
    let y = twisted_primitive(rho, lam, &pair, Twist::Plain);
    let m = mu(tau, rho, &pair);
    for z in [c64(0.2, 0.1), c64(-1.0, -0.2)] {
        let lhs = y.apply(|u| h.eval(u), z)?;
        println!("Y H / H at {z}: {}   μ = {m}", lhs / h.eval(z)?);
    }

    let f = f_eigenfunction(&ctx, ups, sigma, lam);
    let ya = twisted_primitive(sigma, lam.conj(), &pair, Twist::Adjoint);
    let z = c64(0.4, 0.0);
    println!(
        "Y* F / F = {}   expected {}",
        ya.apply(|u| f.eval(u), z)? / f.eval(z)?,
        -mu(ups.conj(), sigma.conj(), &pair)
    );

    let s = 0.5 * I * pair.w1;
    let ratio = h.eval(z + s)? / h.eval(z - s)?;
    println!("H(z + iw1/2)/H(z - iw1/2) = {ratio}, cosh ratio {}", first_order_ratio(tau, rho, lam, &pair, z));
    Ok(())
}

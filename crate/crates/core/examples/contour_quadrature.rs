//! Separating two families of pole sequences by an indented contour and
//! integrating a G-quotient along it.

use std::sync::Arc;

use hypeval::gamma::HypGammaContext;
use hypeval::params::{c64, ModulusPair};
use hypeval::quad::{build_indented_contour, integrate_contour, separates, PoleSequence, QuadratureSpec};
use hypeval::repr::g_quotient_handle;

fn main() -> hypeval::error::Result<()> {
    let pair = ModulusPair::new(1.0, 2f64.sqrt())?;
    let ctx = Arc::new(HypGammaContext::new(pair));

    // G(z + a1)G(z + a2) / G(z + b1)G(z + b2). The first numerator sequence
    // starts above the real axis and the first denominator sequence below it,
    // so no straight line separates them.
    let num = vec![c64(0.3, -1.4), c64(-0.2, -0.3)];
    let den = vec![c64(0.1, 1.3), c64(-0.25, 0.4)];
    let f = g_quotient_handle(&ctx, num.clone(), den.clone(), -1.7 * pair.alpha);

    let desc: Vec<_> = num.iter().map(|&a| PoleSequence::descending(-a, pair.w1, pair.w2)).collect();
    let asc: Vec<_> = den.iter().map(|&b| PoleSequence::ascending(-b, pair.w1, pair.w2)).collect();
    let contour = build_indented_contour(&desc, &asc, 10.0)?;
    println!("vertices:");
    for v in &contour.vertices {
        println!("  {v}");
    }
    println!("separates: {}", separates(&contour, &desc, &asc, 20));

    let r = integrate_contour(&f, &contour, &QuadratureSpec::default())?;
    println!("integral = {} (error estimate {:.1e}, {} panels)", r.value, r.error_estimate, r.panels_used);
    Ok(())
}

//! The principal series π_λ as difference operators: the quantum group
//! relations and the scalar action of the Casimir element.

use hypeval::params::{c64, ModulusPair};
use hypeval::repr::{casimir, casimir_scalar, pi_lambda, DifferenceOperator, Generator};

fn main() -> hypeval::error::Result<()> {
    let pair = ModulusPair::new(1.0, 2f64.sqrt())?;
    let lam = c64(0.21, 0.05);
    let g = |x| pi_lambda(x, lam, &pair);
    let probe = |z: num_complex::Complex64| Ok((-(z - c64(0.1, 0.2)).powi(2)).exp());
    let z = c64(-0.3, 0.15);

    let check = |name: &str, a: &DifferenceOperator, b: &DifferenceOperator| -> hypeval::error::Result<()> {
        let (x, y) = (a.apply(probe, z)?, b.apply(probe, z)?);
        println!("{name:<14} {:.2e}", (x - y).norm() / x.norm().max(y.norm()));
        Ok(())
    };

    let (k, ki, e, f) = (g(Generator::K), g(Generator::KInv), g(Generator::E), g(Generator::F));
    let q = pair.q;
    check("KE = q²EK", &k.compose(&e), &e.compose(&k).scale(q * q))?;
    check("KF = q⁻²FK", &k.compose(&f), &f.compose(&k).scale(1.0 / (q * q)))?;
    check("[E,F]", &e.compose(&f).sub(&f.compose(&e)), &k.sub(&ki).scale(1.0 / (q - 1.0 / q)))?;
    check("[E,Ẽ] = 0", &e.compose(&g(Generator::ETilde)), &g(Generator::ETilde).compose(&e))?;

    let om = casimir(lam, &pair);
    let s = casimir_scalar(lam, &pair);
    println!("Ω acts as {s}; on the probe: {}", om.apply(probe, z)? / probe(z)?);
    println!("E has {} shift terms: {:?}", e.shifts().len(), e.shifts());
    Ok(())
}

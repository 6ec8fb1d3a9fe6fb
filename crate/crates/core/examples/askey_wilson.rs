//! Askey-Wilson polynomials from the terminating ₄φ₃ series and the
//! second-order operator they diagonalise.

use hypeval::params::{aw_params, c64, lambda_n, reference};
use hypeval::qseries::{aw_eigen_residual, aw_polynomial_for, coeff_a, coeff_a_sinh, q_pochhammer};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let p = aw_params(&gamma, &pair);
    println!("a, b, c, d = {}, {}, {}, {}", p.a, p.b, p.c, p.d);
    println!("(q²; q²)_3 = {}", q_pochhammer(pair.q * pair.q, pair.q * pair.q, 3));

    let x = c64(0.3, 0.1);
    for n in 0..=4 {
        let (lhs, rhs) = aw_eigen_residual(n, &gamma, &pair, x)?;
        println!(
            "n = {n}: r_n(x) = {:.6}, λ_n = {:.4}, |𝓛r_n - v r_n| = {:.1e}",
            aw_polynomial_for(n, &gamma, &pair, x)?,
            lambda_n(n, &gamma, &pair),
            (lhs - rhs).norm()
        );
    }
    let a1 = coeff_a(&pair, &gamma, x)?;
    let a2 = coeff_a_sinh(&pair, &gamma, x)?;
    println!("A(x) product form {a1}, sinh form {a2}");
    Ok(())
}

//! The map Ψ on d² + d² diagonal blocks and the factorization of Θ through it.
use qlp::embeddings::{factorization_parameters, factorization_residual, psi_norm, psi_norm_by_basis};
use qlp::linalg::Exponent;

fn main() -> qlp::Result<()> {
    let p = Exponent::new(2.0)?;
    println!("‖Ψ(1, 1, 1)‖ at d = 2, p = 2: {:.12} (√11 = {:.12})", psi_norm(2, 1.0, 1.0, 1.0, p), 11f64.sqrt());
    println!("basis-vector maximum: {:.12}", psi_norm_by_basis(2, 1.0, 1.0, 1.0, p)?);

    let (n, d, lambda) = (6, 2, 0.3);
    let (alpha, beta, delta) = factorization_parameters(n, d, lambda, p);
    println!("n = {n}, d = {d}, λ = {lambda}: α = {alpha:.6}, β = {beta:.6}, δ = {delta:.6}");
    println!("factorization residual: {:.2e}", factorization_residual(n, d, lambda, p, 10, 0)?);
    Ok(())
}

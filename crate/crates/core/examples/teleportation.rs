//! Weyl operators, the teleportation identity and the teleportation embedding.
use qlp::linalg::{random_density, schatten_norm, Exponent};
use qlp::mixed_norms::{mixed_norm_positive, MixedNormSpec};
use qlp::optimize::OptimizerOptions;
use qlp::weyl::{basis_expansion_residual, eta_basis, roots_of_unity_residual, teleport_identity_residual};
use qlp::embeddings::teleport_pair;
use qlp::linalg::random_pure_state;

fn main() -> qlp::Result<()> {
    let n = 3;
    let basis = eta_basis(n)?;
    println!("η basis Gram residual: {:.2e}", basis.gram_residual());
    println!("Σ roots of unity residual: {:.2e}", roots_of_unity_residual(n));
    println!("basis expansion residual: {:.2e}", basis_expansion_residual(n)?);
    let h = random_pure_state(&[n], 3);
    println!("teleportation identity residual: {:.2e}", teleport_identity_residual(n, h.amplitudes())?);

    let (p, q) = (Exponent::new(2.0)?, Exponent::new(4.0)?);
    let pair = teleport_pair(n, p, q)?;
    println!("{}", pair.claimed_contract);
    println!("P∘J residual: {:.2e}", pair.complementation_residual(20, 1)?);

    let x = random_density(n, n, 5)?;
    let (y, outer, inner) = pair.mixed_layout(&pair.embed.apply(&x)?)?;
    let opts = OptimizerOptions { restarts: 4, ..OptimizerOptions::default() };
    let image = mixed_norm_positive(&y, &MixedNormSpec::new(q, p, outer, inner), &opts)?;
    println!("‖x‖_2 = {:.10}, ‖J x‖ in S_4[S_2] ≥ {:.10}", schatten_norm(&x, p), image.value);
    Ok(())
}

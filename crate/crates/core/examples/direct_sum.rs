//! Embedding a direct sum of matrix blocks into a single mixed-norm space.
use qlp::embeddings::direct_sum_pair;
use qlp::linalg::Exponent;

fn main() -> qlp::Result<()> {
    let dims = [2, 3, 4];
    let pair = direct_sum_pair(&dims, Exponent::new(1.0)?, Exponent::new(2.0)?)?;
    println!("{}", pair.claimed_contract);
    println!("layout {:?}", pair.layout);
    println!("P∘J residual {:.2e}", pair.complementation_residual(50, 9)?);
    let (e, p) = pair.min_choi_eigenvalues()?;
    println!("min Choi eigenvalues ({e:.2e}, {p:.2e})");
    Ok(())
}

//! The superdense-coding embedding of diagonal matrices.
use qlp::embeddings::superdense_pair;
use qlp::linalg::Exponent;

fn main() -> qlp::Result<()> {
    for n in [2, 3, 4] {
        let pair = superdense_pair(n, Exponent::new(1.5)?, Exponent::new(3.0)?)?;
        let (e, p) = pair.min_choi_eigenvalues()?;
        println!(
            "n = {n}: P∘J residual {:.2e}, min Choi eigenvalues ({e:.2e}, {p:.2e}), scale {:?}",
            pair.complementation_residual(20, n as u64)?,
            pair.scale
        );
    }
    Ok(())
}

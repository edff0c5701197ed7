//! Schatten norms, partial traces and the mixed norm of a positive element.
use qlp::linalg::{partial_trace, random_density, schatten_norm, Exponent};
use qlp::mixed_norms::{mixed_norm_positive, MixedNormSpec};
use qlp::optimize::OptimizerOptions;

fn main() -> qlp::Result<()> {
    let rho = random_density(6, 3, 42)?;
    for p in [1.0, 2.0, 4.0, f64::INFINITY] {
        println!("‖ρ‖_{p} = {:.12}", schatten_norm(&rho, Exponent::new(p)?));
    }

    let reduced = partial_trace(&rho, &[2, 3], &[0])?;
    println!("tr_2 ρ =\n{reduced:.6}");

    let opts = OptimizerOptions { restarts: 8, ..OptimizerOptions::default() };
    for (p, q) in [(2.0, 1.0), (4.0, 2.0), (2.0, 4.0)] {
        let spec = MixedNormSpec::new(Exponent::new(p)?, Exponent::new(q)?, 2, 3);
        let report = mixed_norm_positive(&rho, &spec, &opts)?;
        println!("S_{p}[S_{q}] norm ≈ {:.10} ({:?})", report.value, report.kind);
    }
    Ok(())
}

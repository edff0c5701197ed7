//! Numerical d-norms of depolarizing and erasure channels against their closed forms.
use qlp::capacities::{dnorm_depolarizing_closed, dnorm_erasure_closed};
use qlp::channels::{depolarizing, erasure};
use qlp::linalg::Exponent;
use qlp::mixed_norms::channel_d_norm;
use qlp::optimize::OptimizerOptions;

fn main() -> qlp::Result<()> {
    let opts = OptimizerOptions { restarts: 8, ..OptimizerOptions::default() };
    let (n, lambda) = (3, 0.4);
    for d in 1..=n {
        for p in [1.5, 3.0] {
            let p = Exponent::new(p)?;
            let dep = channel_d_norm(&depolarizing(n, lambda)?, d, p, &opts)?;
            let era = channel_d_norm(&erasure(n, lambda)?, d, p, &opts)?;
            println!(
                "d = {d}, p = {:.1}: depolarizing {:.10} vs {:.10}, erasure {:.10} vs {:.10}",
                p.value(),
                dep.value,
                dnorm_depolarizing_closed(n, d, lambda, p)?,
                era.value,
                dnorm_erasure_closed(n, d, lambda, p)?
            );
        }
    }
    Ok(())
}

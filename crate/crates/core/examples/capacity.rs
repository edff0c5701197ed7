//! Entanglement-restricted capacities from closed forms and from d-norm derivatives.
use qlp::capacities::{capacity_via_derivative, depolarizing_bounds_check};
use qlp::channels::{depolarizing, erasure};
use qlp::optimize::OptimizerOptions;

fn main() -> qlp::Result<()> {
    let opts = OptimizerOptions { restarts: 4, ..OptimizerOptions::default() };
    for ch in [depolarizing(4, 0.6)?, erasure(3, 0.6)?] {
        for d in [1, 2] {
            let r = capacity_via_derivative(&ch, d, &opts)?;
            println!(
                "{} d = {d}: closed {:.9} bits, derivative {:.9} bits",
                r.descriptor,
                r.closed_form_bits.unwrap_or(f64::NAN),
                r.numeric_bits
            );
        }
    }
    let b = depolarizing_bounds_check(4, 2, 0.6)?;
    println!("bounds {:.6} <= {:.6} <= {:.6}", b.lower, b.capacity, b.upper);
    Ok(())
}

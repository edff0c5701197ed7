//! The superadditivity gap f(4, 2, λ) over a λ grid, and its peak.
use qlp::capacities::{depolarizing_combination, gap_f};
use qlp::entropy::Base;

fn main() -> qlp::Result<()> {
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let values = grid.iter().map(|&l| gap_f(4, 2, l)).collect::<qlp::Result<Vec<_>>>()?;
    let (at, peak) = grid
        .iter()
        .zip(&values)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");
    println!("max f(4, 2, λ) = {peak:.9} bits at λ = {at}");

    let worst = grid[1..1000]
        .iter()
        .map(|&l| depolarizing_combination(3, 3, 2, l, Base::Bits))
        .collect::<qlp::Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    println!("n = 3: C³ + C¹ - 2C² stays below {worst:.3e}");
    Ok(())
}

//! Building, certifying and serializing channels.
use qlp::channels::{depolarizing, direct_sum, erasure, tensor, QuantumChannel};

fn main() -> qlp::Result<()> {
    let ch = direct_sum(&[depolarizing(2, 0.5)?, erasure(2, 0.2)?], &[0.3, 0.7])?;
    println!("in {}, out {}, {} Kraus operators", ch.in_dim(), ch.out_dim(), ch.kraus().len());
    println!("certification passed: {}", ch.certify(0)?.passed());

    let json = ch.to_json()?;
    println!("{json}");
    let back = QuantumChannel::from_json(&json)?;
    println!("round trip equal: {}", back.kraus() == ch.kraus());

    let pair = tensor(&depolarizing(2, 0.9)?, &depolarizing(2, 0.9)?)?;
    println!("tensor square covariance residual: {:?}", pair.covariance_residual(10, 1)?);
    Ok(())
}

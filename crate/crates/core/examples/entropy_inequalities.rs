//! Random-state checks of strong subadditivity, the Fannes bound and the erasure-component inequality.
use qlp::capacities::{fannes_check, ssa_check, v_d_erasure_component_check};

fn main() -> qlp::Result<()> {
    let ssa = ssa_check([2, 2, 2], 200, 1)?;
    println!("SSA: {} trials, min slack {:.3e}", ssa.trials, ssa.min_slack);
    let fannes = fannes_check(3, 200, 2)?;
    println!("Fannes: {} trials, min slack {:.3e}", fannes.trials, fannes.min_slack);
    for s in 1..=3 {
        let r = v_d_erasure_component_check(2, 3, s, 100, 3)?;
        println!("erasure components k = 3, s = {s}: min slack {:.3e}", r.min_slack);
    }
    Ok(())
}

//! Energies of a spin-1 BEG model and the checks on its pair potential.

use polyspin::model::{
    hamiltonian, validate_assumption_a, validate_assumption_b, CouplingBound, PairPotential,
    SpinConfiguration, SpinSystem, Volume,
};

fn main() -> polyspin::Result<()> {
    let sys = SpinSystem::beg(1, 1.0, 0.5, 1.5, 0.7)?;
    let vol = Volume::chain(4)?;

    for spins in [
        vec![0, 0, 0, 0],
        vec![1, 1, 1, 1],
        vec![1, -1, 1, -1],
        vec![1, 0, -1, 0],
    ] {
        let cfg = SpinConfiguration::new(spins.clone());
        println!("H{spins:?} = {}", hamiltonian(&sys, &vol, &cfg)?);
    }

    println!(
        "vanishes on zero spins: {}",
        validate_assumption_a(&sys, &vol).passed()
    );
    let b = validate_assumption_b(&sys, &vol)?;
    println!(
        "dominated by coupling: {}, J = {}",
        b.pointwise.passed(),
        b.coupling_constant()
    );

    // A potential that charges a spin pair with a zero member breaks the expansion.
    let bad = SpinSystem::new(
        1,
        1,
        1.0,
        1.0,
        PairPotential::tabulated(|x, y, _, _| if x.is_neighbor(y) { 0.1 } else { 0.0 }),
        CouplingBound::nearest_neighbor(0.1),
    )?;
    println!(
        "constant potential: {:?}",
        validate_assumption_a(&bad, &vol)
    );
    Ok(())
}

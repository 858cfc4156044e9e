//! `Z = W^|Λ| Ξ` for a few systems, each side computed independently.

use polyspin::expansion::{factorization_check, partition_function_exact};
use polyspin::model::{SpinSystem, Volume};

fn main() -> polyspin::Result<()> {
    let cases = [
        (
            "BEG chain",
            SpinSystem::beg(1, 1.0, 0.5, 1.5, 0.7)?,
            Volume::chain(5)?,
        ),
        (
            "BEG box",
            SpinSystem::beg(2, -0.8, 1.2, 0.4, 1.1)?,
            Volume::cuboid(&[2, 3])?,
        ),
        (
            "spin-2 power law",
            SpinSystem::power_law(1, 2, 0.6, 1.0, Some(32), 0.8, 0.9)?,
            Volume::chain(4)?,
        ),
    ];
    for (name, sys, vol) in cases {
        let check = factorization_check(&sys, &vol)?;
        println!(
            "{name:<18} Z = {:<22} W^n Xi = {:<22} rel err {:.1e}",
            check.lhs, check.rhs, check.rel_err
        );
    }

    let sys = SpinSystem::beg(1, 1.0, 0.0, 1.0, 1.0)?;
    println!(
        "two-site Z = {}",
        partition_function_exact(&sys, &Volume::chain(2)?)?
    );
    Ok(())
}

//! Exact finite-volume pressure against partial sums of the cluster series.

use polyspin::convergence::{criterion_numeric, BoundMode};
use polyspin::expansion::expansion_record;
use polyspin::model::{SpinSystem, Volume};

fn main() -> polyspin::Result<()> {
    let vol = Volume::chain(4)?;
    for beta in [0.05, 0.7] {
        let sys = SpinSystem::beg(1, 1.0, 0.5, 1.5, beta)?;
        let certified = criterion_numeric(&sys, BoundMode::Analytic)?.holds;
        let rec = expansion_record(&sys, &vol, 4)?;
        println!(
            "beta = {beta}  certified = {certified}  P = {:.12}",
            rec.pressure
        );
        for (k, (s, gap)) in rec.partial_sums.iter().zip(&rec.abs_gaps).enumerate() {
            println!("  S_{} = {s:.12}  |S - P| = {gap:.3e}", k + 1);
        }
    }
    Ok(())
}

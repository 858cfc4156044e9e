//! Analyticity intervals in β for nearest-neighbor couplings at several
//! crystal fields.

use polyspin::convergence::{find_beta_intervals, scan, ScanGrid};
use polyspin::model::SpinSystem;

fn main() -> polyspin::Result<()> {
    let grid = ScanGrid::default();
    for field in [0.9, 1.2, 5.0, 18.0] {
        let sys = SpinSystem::nearest_neighbor(1, 1, 1.0, field, 0.0)?;
        let iv = find_beta_intervals(&sys, &grid)?;
        println!(
            "D = {field:>4}: beta1 = {:?}, beta2 = {:?}, all beta = {}",
            iv.beta1, iv.beta2, iv.all_beta
        );
    }

    let sys = SpinSystem::nearest_neighbor(1, 1, 1.0, 1.2, 0.0)?;
    let report = scan(&sys, &ScanGrid::new(0.0, 20.0, 2.0)?)?;
    println!(
        "{:>6} {:>12} {:>12} {:>6} {:>6} {:>6}",
        "beta", "lhs", "rhs", "closed", "numeric", "crude"
    );
    for r in &report.rows {
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>6} {:>6} {:>6}",
            r.beta, r.lhs, r.rhs, r.closed_form, r.numeric, r.crude
        );
    }
    Ok(())
}

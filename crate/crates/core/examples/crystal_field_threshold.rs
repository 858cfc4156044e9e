//! The crystal field above which the crude criterion holds at every β.

use polyspin::convergence::{criterion_crude, dc_upper, f_of_beta};
use polyspin::model::SpinSystem;

fn main() -> polyspin::Result<()> {
    for n in 1..=3 {
        let d = dc_upper(n, 1.0);
        let sys = SpinSystem::nearest_neighbor(1, n, 1.0, d, 0.0)?;
        let failures = (0..=10_000)
            .map(|i| sys.with_beta(i as f64 * 0.01))
            .filter(|s| !criterion_crude(s.as_ref().unwrap()).unwrap())
            .count();
        let f_min = (0..=10_000)
            .map(|i| f_of_beta(&sys.with_beta(i as f64 * 0.01).unwrap()).unwrap())
            .fold(f64::INFINITY, f64::min);
        println!(
            "N = {n}: D_c <= {d:.6}, crude failures on [0, 100]: {failures}, min F = {f_min:.6} (floor {:.6})",
            1.0 / (6.0 * n as f64 + 16.0 * (n * n) as f64)
        );
    }
    Ok(())
}

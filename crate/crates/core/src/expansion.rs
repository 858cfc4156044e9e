//! Exact partition functions, the polymer partition function and the
//! truncated cluster series of the pressure.
//!
//! The factorization `Z_Λ = W^{|Λ|} Ξ_Λ` ties two independent computations
//! together: [`partition_function_exact`] sums Boltzmann weights over every spin
//! configuration, while [`xi_exact`] sums products of polymer activities over
//! collections of pairwise disjoint polymers.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{ursell_sum, EdgeWeights};
use crate::model::{PairTable, SpinSystem, Volume};
use crate::polymers::{activity_table, single_site_weight, ActivityTable};
use crate::{relative_error, Error, Result, IDENTITY_TOLERANCE};

/// Largest number of spin configurations enumerated for `Z_Λ` (`3^12`).
pub const MAX_CONFIGURATIONS: usize = 531_441;
/// Largest number of polymers per cluster in the truncated series.
pub const MAX_SERIES_ORDER: usize = 4;

fn configuration_count(sys: &SpinSystem, vol: &Volume) -> Result<usize> {
    let base = 2 * sys.spin_bound() as usize + 1;
    let mut count = 1usize;
    for _ in 0..vol.len() {
        count = count.saturating_mul(base);
        if count > MAX_CONFIGURATIONS {
            return Err(Error::Budget {
                what: "spin configurations",
                requested: count,
                limit: MAX_CONFIGURATIONS,
            });
        }
    }
    Ok(count)
}

/// `Z_Λ(β) = Σ_σ e^{-β H_Λ(σ)}` by exhaustive enumeration.
pub fn partition_function_exact(sys: &SpinSystem, vol: &Volume) -> Result<f64> {
    let count = configuration_count(sys, vol)?;
    let table = PairTable::new(sys, vol.sites());
    let n = sys.spin_bound() as i32;
    let base = (2 * n + 1) as usize;
    let k = vol.len();
    let beta = sys.beta();
    let field = sys.crystal_field();

    // Blocks are indexed by the spin of the last site; each block sums in a
    // fixed order and blocks are combined in index order.
    let block = count / base;
    let partials: Vec<f64> = (0..base)
        .into_par_iter()
        .map(|b| {
            let mut spins = vec![-n; k];
            let mut sum = 0.0;
            for idx in 0..block {
                let mut code = idx + b * block;
                for s in spins.iter_mut() {
                    *s = (code % base) as i32 - n;
                    code /= base;
                }
                let sq: i32 = spins.iter().map(|s| s * s).sum();
                let energy = table.energy(&spins) + field * sq as f64;
                sum += (-beta * energy).exp();
            }
            sum
        })
        .collect();
    Ok(partials.iter().sum())
}

/// `f_Λ(β) = ln Z_Λ / |Λ|`.
pub fn free_energy_exact(sys: &SpinSystem, vol: &Volume) -> Result<f64> {
    Ok(partition_function_exact(sys, vol)?.ln() / vol.len() as f64)
}

/// `Ξ_Λ = 1 + Σ over nonempty sets of pairwise disjoint polymers of Π ζ(R_i)`.
///
/// Collections are enumerated by deciding sites in canonical order: the
/// lowest undecided site is either left uncovered or covered by a polymer
/// that it is the smallest member of.
pub fn xi_exact(table: &ActivityTable) -> Result<f64> {
    let n = table.volume().len();
    if table.max_size() < n {
        return Err(Error::IncompleteTable {
            max_size: table.max_size(),
            volume: n,
        });
    }
    let mut by_lowest: Vec<Vec<(u64, f64)>> = vec![Vec::new(); n];
    for e in table.entries() {
        if e.zeta != 0.0 {
            by_lowest[e.members[0]].push((e.mask(), e.zeta));
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(disjoint_sum(full, 0, &by_lowest, &mut memo))
}

fn disjoint_sum(
    full: u64,
    decided: u64,
    by_lowest: &[Vec<(u64, f64)>],
    memo: &mut HashMap<u64, f64>,
) -> f64 {
    if decided == full {
        return 1.0;
    }
    if let Some(&v) = memo.get(&decided) {
        return v;
    }
    let site = (!decided).trailing_zeros() as usize;
    let mut total = disjoint_sum(full, decided | 1 << site, by_lowest, memo);
    for &(mask, zeta) in &by_lowest[site] {
        if mask & decided == 0 {
            total += zeta * disjoint_sum(full, decided | mask, by_lowest, memo);
        }
    }
    memo.insert(decided, total);
    total
}

/// Both sides of `Z_Λ = W^{|Λ|} Ξ_Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

impl FactorizationCheck {
    pub fn passed(&self) -> bool {
        self.rel_err <= IDENTITY_TOLERANCE
    }
}

pub fn factorization_check(sys: &SpinSystem, vol: &Volume) -> Result<FactorizationCheck> {
    let table = activity_table(sys, vol, vol.len())?;
    factorization_check_with_table(sys, vol, &table)
}

/// The factorization against a caller-supplied table.
pub fn factorization_check_with_table(
    sys: &SpinSystem,
    vol: &Volume,
    table: &ActivityTable,
) -> Result<FactorizationCheck> {
    if table.volume() != vol {
        return Err(Error::InvalidParameter(
            "activity table belongs to another volume".into(),
        ));
    }
    let lhs = partition_function_exact(sys, vol)?;
    let rhs = single_site_weight(sys).powi(vol.len() as i32) * xi_exact(table)?;
    Ok(FactorizationCheck {
        lhs,
        rhs,
        rel_err: relative_error(lhs, rhs),
    })
}

fn pressure_from(sys: &SpinSystem, vol: &Volume, table: &ActivityTable) -> Result<(f64, f64, f64)> {
    let xi = xi_exact(table)?;
    if !(xi > 0.0) {
        return Err(Error::Inconsistent(format!(
            "polymer partition function is {xi}"
        )));
    }
    let size = vol.len() as f64;
    let z = partition_function_exact(sys, vol)?;
    let free = z.ln() / size;
    let pressure = xi.ln() / size;
    let gap = (free - single_site_weight(sys).ln() - pressure).abs();
    if gap > IDENTITY_TOLERANCE * free.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "f - ln W - P = {gap:e} exceeds tolerance"
        )));
    }
    Ok((z, free, pressure))
}

/// `P_Λ = ln Ξ_Λ / |Λ|`, cross-checked against `f_Λ - ln W`.
pub fn pressure_exact(sys: &SpinSystem, vol: &Volume) -> Result<f64> {
    let table = activity_table(sys, vol, vol.len())?;
    Ok(pressure_from(sys, vol, &table)?.2)
}

/// Cluster coefficient `Σ_{g ⊆ G connected spanning} (-1)^{|g|}` of an
/// incompatibility graph `G` on `n` vertices, by graph bitmask over the
/// upper-triangle pairs.
fn cluster_coefficients(n: usize) -> Result<Vec<f64>> {
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let m = n * (n - 1) / 2;
    (0..1u32 << m)
        .map(|mask| {
            let mut k = 0;
            let w = EdgeWeights::from_fn(n, |_, _| {
                let on = mask >> k & 1 == 1;
                k += 1;
                if on {
                    f64::INFINITY
                } else {
                    0.0
                }
            });
            ursell_sum(&w)
        })
        .collect()
}

/// Partial sums `S_1, …, S_order` of the cluster series of `P_Λ`, where `S_k`
/// collects clusters of at most `k` polymers:
///
/// ```text
///   S_k = |Λ|^{-1} Σ_{n ≤ k} (1/n!) Σ_{(R_1..R_n)} φ(R_1..R_n) Π ζ(R_i)
/// ```
///
/// with `φ` the cluster coefficient of the incompatibility graph. Ordered
/// tuples are grouped into multisets, each weighted by `1/Π m_i!`.
pub fn pressure_truncated(table: &ActivityTable, order: usize) -> Result<Vec<f64>> {
    if !(1..=MAX_SERIES_ORDER).contains(&order) {
        return Err(Error::Budget {
            what: "cluster series order",
            requested: order,
            limit: MAX_SERIES_ORDER,
        });
    }
    let polymers: Vec<(u64, f64)> = table
        .entries()
        .iter()
        .filter(|e| e.zeta != 0.0)
        .map(|e| (e.mask(), e.zeta))
        .collect();
    let size = table.volume().len() as f64;
    let mut partial = Vec::with_capacity(order);
    let mut running = 0.0;
    for n in 1..=order {
        let coefficients = cluster_coefficients(n)?;
        let mut chosen = Vec::with_capacity(n);
        let mut total = 0.0;
        multisets(&polymers, n, 0, &mut chosen, &coefficients, &mut total);
        running += total;
        partial.push(running / size);
    }
    Ok(partial)
}

fn multisets(
    polymers: &[(u64, f64)],
    n: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    coefficients: &[f64],
    total: &mut f64,
) {
    if chosen.len() == n {
        *total += cluster_term(polymers, chosen, coefficients);
        return;
    }
    for i in start..polymers.len() {
        chosen.push(i);
        multisets(polymers, n, i, chosen, coefficients, total);
        chosen.pop();
    }
}

fn cluster_term(polymers: &[(u64, f64)], chosen: &[usize], coefficients: &[f64]) -> f64 {
    let n = chosen.len();
    let mut graph = 0u32;
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if polymers[chosen[a]].0 & polymers[chosen[b]].0 != 0 {
                graph |= 1 << k;
            }
            k += 1;
        }
    }
    let phi = coefficients[graph as usize];
    if phi == 0.0 {
        return 0.0;
    }
    let mut product = phi;
    let mut multiplicity = 1.0;
    let mut run = 1.0;
    for a in 0..n {
        product *= polymers[chosen[a]].1;
        if a > 0 && chosen[a] == chosen[a - 1] {
            run += 1.0;
            multiplicity *= run;
        } else {
            run = 1.0;
        }
    }
    product / multiplicity
}

/// Exact and truncated thermodynamics of one system on one volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub volume: Vec<Vec<i64>>,
    pub beta: f64,
    #[serde(rename = "D")]
    pub crystal_field: f64,
    #[serde(rename = "Z")]
    pub partition_function: f64,
    pub f: f64,
    #[serde(rename = "P_exact")]
    pub pressure: f64,
    pub partial_sums: Vec<f64>,
    pub abs_gaps: Vec<f64>,
}

pub fn expansion_record(sys: &SpinSystem, vol: &Volume, order: usize) -> Result<ExpansionRecord> {
    let table = activity_table(sys, vol, vol.len())?;
    let (z, free, pressure) = pressure_from(sys, vol, &table)?;
    let partial_sums = pressure_truncated(&table, order)?;
    let abs_gaps = partial_sums.iter().map(|s| (s - pressure).abs()).collect();
    Ok(ExpansionRecord {
        volume: vol.sites().iter().map(|s| s.coords().to_vec()).collect(),
        beta: sys.beta(),
        crystal_field: sys.crystal_field(),
        partition_function: z,
        f: free,
        pressure,
        partial_sums,
        abs_gaps,
    })
}

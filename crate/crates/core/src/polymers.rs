//! Polymer activities of the high-temperature expansion.
//!
//! A polymer is a set `R` of at least two sites. Its activity is
//!
//! ```text
//!   ζ(R) = W^{-|R|} Σ_{σ_R, all σ_x ≠ 0} e^{-βD Σ σ_x²} Σ_{g ∈ G_R} Π_{{x,y}∈g} (e^{-βV(x,y,σ_x,σ_y)} - 1)
//! ```
//!
//! with `W = 1 + 2 Σ_{k=1}^N e^{-βDk²}` the single-site weight. Zero spins are
//! left out of the sum because the potential vanishes on them.

use itertools::Itertools;
use rayon::prelude::*;

use crate::combinatorics::{connected_sum, DisjointSets, EdgeWeights, MAX_GRAPH_VERTICES};
use crate::model::{check_zero_spin, PairTable, Site, SpinSystem, Verdict, Volume};
use crate::{convergence, Error, Result};

pub const MAX_POLYMER_SIZE: usize = MAX_GRAPH_VERTICES;
pub const MAX_SPIN_BOUND: u32 = 3;
/// Largest number of polymers an activity table may hold.
pub const MAX_TABLE_ENTRIES: usize = 1 << 17;

/// A finite set of at least two sites, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polymer {
    sites: Vec<Site>,
}

impl Polymer {
    pub fn new(mut sites: Vec<Site>) -> Result<Self> {
        sites.sort();
        if sites.len() < 2 {
            return Err(Error::InvalidParameter(
                "a polymer needs at least two sites".into(),
            ));
        }
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "polymer sites must be distinct".into(),
            ));
        }
        Ok(Polymer { sites })
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `1 + 2 Σ_{k=1}^N e^{-βDk²}`.
pub fn single_site_weight(sys: &SpinSystem) -> f64 {
    let bd = sys.beta() * sys.crystal_field();
    1.0 + 2.0
        * (1..=sys.spin_bound())
            .map(|k| (-bd * (k * k) as f64).exp())
            .sum::<f64>()
}

/// `λ̃_β = e^{-βD} / (1 + 2 Σ_k e^{-βDk²})`.
pub fn lambda_tilde(sys: &SpinSystem) -> f64 {
    (-sys.beta() * sys.crystal_field()).exp() / single_site_weight(sys)
}

fn check_budget(sys: &SpinSystem, size: usize) -> Result<()> {
    if size > MAX_POLYMER_SIZE {
        return Err(Error::Budget {
            what: "polymer size",
            requested: size,
            limit: MAX_POLYMER_SIZE,
        });
    }
    if sys.spin_bound() > MAX_SPIN_BOUND {
        return Err(Error::Budget {
            what: "spin bound for activities",
            requested: sys.spin_bound() as usize,
            limit: MAX_SPIN_BOUND as usize,
        });
    }
    Ok(())
}

/// `ζ(R)`.
pub fn activity(sys: &SpinSystem, polymer: &Polymer) -> Result<f64> {
    check_budget(sys, polymer.len())?;
    if let Verdict::Fail(w) = check_zero_spin(sys, polymer.sites()) {
        return Err(Error::AssumptionA {
            x: w.x,
            y: w.y,
            sx: w.sx,
            sy: w.sy,
            value: w.value,
        });
    }
    Ok(activity_unchecked(sys, polymer.sites()))
}

fn activity_unchecked(sys: &SpinSystem, sites: &[Site]) -> f64 {
    let k = sites.len();
    let table = PairTable::new(sys, sites);

    // Only polymers whose interaction graph spans R carry weight.
    let mut sets = DisjointSets::new(k);
    for (i, j, _) in table.pairs() {
        sets.union(*i, *j);
    }
    if sets.components() != 1 {
        return 0.0;
    }

    let beta = sys.beta();
    let bd = beta * sys.crystal_field();
    let spins = sys.nonzero_spin_values();
    let mut total = 0.0;
    for cfg in (0..k)
        .map(|_| spins.iter().copied())
        .multi_cartesian_product()
    {
        let field: i32 = cfg.iter().map(|s| s * s).sum();
        let mut v = vec![0.0; k * (k - 1) / 2];
        for (i, j, values) in table.pairs() {
            v[crate::combinatorics::pair_index(k, *i, *j)] =
                beta * values[table.slot(cfg[*i], cfg[*j])];
        }
        let w = EdgeWeights::from_fn(k, |i, j| v[crate::combinatorics::pair_index(k, i, j)]);
        total += (-bd * field as f64).exp() * connected_sum(&w);
    }
    total / single_site_weight(sys).powi(k as i32)
}

/// One polymer of a table, with its member indices into the table's volume.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivityEntry {
    pub members: Vec<usize>,
    pub polymer: Polymer,
    pub zeta: f64,
}

impl ActivityEntry {
    /// Member indices as a bitmask over the volume.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }
}

/// Activities of every polymer `R ⊂ Λ` with `2 ≤ |R| ≤ max_size`, ordered by
/// size and then lexicographically by member indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivityTable {
    volume: Volume,
    beta: f64,
    max_size: usize,
    entries: Vec<ActivityEntry>,
}

fn subsets(n: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    (2..=max_size).flat_map(move |k| (0..n).combinations(k))
}

fn subset_count(n: usize, max_size: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    for k in 1..=max_size.min(n) {
        binom = binom * (n - k + 1) / k;
        if k >= 2 {
            total = total.saturating_add(binom);
        }
    }
    total
}

impl ActivityTable {
    /// Builds a table from arbitrary activity values, e.g. to probe the polymer
    /// partition function directly.
    pub fn from_fn(
        volume: Volume,
        beta: f64,
        max_size: usize,
        mut zeta: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self> {
        let max_size = Self::check(&volume, max_size)?;
        let entries = subsets(volume.len(), max_size)
            .map(|members| {
                let polymer =
                    Polymer::new(members.iter().map(|&i| volume.sites()[i].clone()).collect())?;
                let zeta = zeta(&members);
                Ok(ActivityEntry {
                    members,
                    polymer,
                    zeta,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ActivityTable {
            volume,
            beta,
            max_size,
            entries,
        })
    }

    fn check(volume: &Volume, max_size: usize) -> Result<usize> {
        if volume.len() > 64 {
            return Err(Error::Budget {
                what: "activity table volume",
                requested: volume.len(),
                limit: 64,
            });
        }
        let max_size = max_size.min(volume.len());
        let count = subset_count(volume.len(), max_size);
        if count > MAX_TABLE_ENTRIES {
            return Err(Error::Budget {
                what: "activity table entries",
                requested: count,
                limit: MAX_TABLE_ENTRIES,
            });
        }
        Ok(max_size)
    }

    pub fn volume(&self) -> &Volume {
        &self.volume
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn entries(&self) -> &[ActivityEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [ActivityEntry] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, polymer: &Polymer) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| &e.polymer == polymer)
            .map(|e| e.zeta)
    }

    /// `ρ_n = max_{x∈Λ} Σ_{R∋x, |R|=n} |ζ(R)|` for `n = 0..=max_size`
    /// (entries below 2 are zero).
    pub fn size_sups(&self) -> Vec<f64> {
        let n = self.volume.len();
        let mut per_site = vec![vec![0.0; n]; self.max_size + 1];
        for e in &self.entries {
            for &x in &e.members {
                per_site[e.members.len()][x] += e.zeta.abs();
            }
        }
        per_site
            .into_iter()
            .map(|row| row.into_iter().fold(0.0, f64::max))
            .collect()
    }
}

/// Exact activities of every polymer in `vol` up to `max_size` sites.
pub fn activity_table(sys: &SpinSystem, vol: &Volume, max_size: usize) -> Result<ActivityTable> {
    let max_size = ActivityTable::check(vol, max_size)?;
    check_budget(sys, max_size)?;
    if let Verdict::Fail(w) = check_zero_spin(sys, vol.sites()) {
        return Err(Error::AssumptionA {
            x: w.x,
            y: w.y,
            sx: w.sx,
            sy: w.sy,
            value: w.value,
        });
    }
    let members: Vec<Vec<usize>> = subsets(vol.len(), max_size).collect();
    let entries = members
        .into_par_iter()
        .map(|members| {
            let sites: Vec<Site> = members.iter().map(|&i| vol.sites()[i].clone()).collect();
            let zeta = activity_unchecked(sys, &sites);
            Ok(ActivityEntry {
                members,
                polymer: Polymer::new(sites)?,
                zeta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ActivityTable {
        volume: vol.clone(),
        beta: sys.beta(),
        max_size,
        entries,
    })
}

/// `q = 2N λ̃_β e^{βJ}`, the per-site factor of the activity bound.
pub fn site_factor(sys: &SpinSystem) -> Result<f64> {
    let j = sys.coupling_constant()?;
    Ok(2.0 * sys.spin_bound() as f64 * lambda_tilde(sys) * (sys.beta() * j).exp())
}

/// Upper bound `n^{n-2}/(n-1)! · h(β,J)^{n-1} · (2N λ̃_β e^{βJ})^n` on
/// `sup_x Σ_{R∋x, |R|=n} |ζ(R)|`.
pub fn activity_size_bound(sys: &SpinSystem, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "polymer size must be at least 2, got {n}"
        )));
    }
    let h = convergence::h_beta(sys)?;
    let q = site_factor(sys)?;
    Ok(size_bound_sequence(h, q).nth(n - 2).unwrap())
}

/// `ρ_2, ρ_3, …` of the activity bound for given `h` and `q`, generated by
/// `ρ_{n+1} / ρ_n = ((n+1)/n)^{n-1} h q`.
pub(crate) fn size_bound_sequence(h: f64, q: f64) -> impl Iterator<Item = f64> {
    let mut n = 2usize;
    let mut value = h * q * q;
    std::iter::from_fn(move || {
        let current = value;
        let k = n as f64;
        value *= ((k + 1.0) / k).powi(n as i32 - 1) * h * q;
        n += 1;
        Some(current)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ursell_sum;
    use crate::model::{CouplingBound, PairPotential, SpinConfiguration};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn single_site_weight_values() {
        let s = SpinSystem::beg(1, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(single_site_weight(&s), 3.0);
        let s = SpinSystem::beg(1, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(close(
            single_site_weight(&s),
            1.0 + 2.0 * (-1f64).exp(),
            1e-15
        ));
        assert!(close(single_site_weight(&s), 1.7357588823428847, 1e-15));
        let s = SpinSystem::beg(1, 1.0, 0.0, 1.0, 800.0).unwrap();
        assert_eq!(single_site_weight(&s), 1.0);
    }

    #[test]
    fn lambda_tilde_values() {
        let s = SpinSystem::beg(1, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(close(lambda_tilde(&s), 1.0 / 3.0, 1e-15));
        for n in 1..=3 {
            let s = SpinSystem::nearest_neighbor(1, n, 1.0, 1.3, 0.0).unwrap();
            assert!(close(lambda_tilde(&s), 1.0 / (1.0 + 2.0 * n as f64), 1e-15));
        }
        let s = SpinSystem::beg(1, 1.0, 0.0, 1.0, 2.0).unwrap();
        let e2 = (-2f64).exp();
        assert!(close(lambda_tilde(&s), e2 / (1.0 + 2.0 * e2), 1e-15));
        assert!((lambda_tilde(&s) - 0.10651).abs() < 1e-5);
    }

    fn pair(a: i64, b: i64) -> Polymer {
        Polymer::new(vec![Site::index(a), Site::index(b)]).unwrap()
    }

    #[test]
    fn beg_pair_activity_hand_sum() {
        let sys = SpinSystem::beg(1, 1.0, 0.0, 2.0, 1.0).unwrap();
        let z = activity(&sys, &pair(0, 1)).unwrap();
        let w = 1.0 + 2.0 * (-2f64).exp();
        let e = std::f64::consts::E;
        let expected = (-4f64).exp() * 2.0 * (e + 1.0 / e - 2.0) / (w * w);
        assert!(close(z, expected, 1e-14), "{z} vs {expected}");
    }

    #[test]
    fn vanishing_activities() {
        let sys = SpinSystem::beg(1, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(activity(&sys, &pair(0, 1)).unwrap(), 0.0);
        let sys = SpinSystem::beg(1, 1.0, 0.5, 1.0, 1.0).unwrap();
        assert_eq!(activity(&sys, &pair(0, 2)).unwrap(), 0.0);
        let tri = Polymer::new(vec![Site::index(0), Site::index(1), Site::index(5)]).unwrap();
        assert_eq!(activity(&sys, &tri).unwrap(), 0.0);
    }

    #[test]
    fn assumption_a_violation_is_an_error() {
        let sys = SpinSystem::new(
            1,
            1,
            1.0,
            1.0,
            PairPotential::tabulated(|_, _, sx, sy| if sx == 0 && sy != 0 { 0.2 } else { 0.0 }),
            CouplingBound::nearest_neighbor(1.0),
        )
        .unwrap();
        assert!(matches!(
            activity(&sys, &pair(0, 1)),
            Err(Error::AssumptionA { .. })
        ));
    }

    #[test]
    fn budgets() {
        let sys = SpinSystem::beg(1, 1.0, 0.0, 1.0, 1.0).unwrap();
        let big = Polymer::new((0..8).map(Site::index).collect()).unwrap();
        assert!(matches!(activity(&sys, &big), Err(Error::Budget { .. })));
        let sys = SpinSystem::nearest_neighbor(1, 4, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            activity(&sys, &pair(0, 1)),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn table_counts_and_zero_entries() {
        let sys = SpinSystem::beg(1, 1.0, 0.5, 1.0, 0.5).unwrap();
        let vol = Volume::chain(4).unwrap();
        let table = activity_table(&sys, &vol, 4).unwrap();
        assert_eq!(table.len(), 11);
        assert_eq!(table.get(&pair(0, 2)), Some(0.0));
        assert!(table.get(&pair(0, 1)).unwrap() != 0.0);

        let zero = SpinSystem::beg(1, 0.0, 0.0, 1.0, 0.5).unwrap();
        let table = activity_table(&zero, &vol, 4).unwrap();
        assert!(table.entries().iter().all(|e| e.zeta == 0.0));

        let table = activity_table(&sys, &Volume::chain(3).unwrap(), 3).unwrap();
        assert_eq!(table.len(), 4);
    }

    #[test]
    fn zero_spins_contribute_nothing() {
        // Brute-force oracle: all (2N+1)^|R| configurations, zeros included,
        // with the enumerated connected-graph sum.
        let sys = SpinSystem::nearest_neighbor(2, 2, 0.8, 0.4, 0.6).unwrap();
        let sites = vec![
            Site::new(vec![0, 0]),
            Site::new(vec![0, 1]),
            Site::new(vec![1, 1]),
        ];
        let polymer = Polymer::new(sites.clone()).unwrap();
        let mut full = 0.0;
        for cfg in SpinConfiguration::all(3, 2) {
            let s = cfg.spins();
            let field: i32 = s.iter().map(|x| x * x).sum();
            let w = EdgeWeights::from_fn(3, |i, j| {
                sys.beta() * sys.potential().eval(&sites[i], &sites[j], s[i], s[j])
            });
            full +=
                (-sys.beta() * sys.crystal_field() * field as f64).exp() * ursell_sum(&w).unwrap();
        }
        full /= single_site_weight(&sys).powi(3);
        assert!(close(activity(&sys, &polymer).unwrap(), full, 1e-12));
    }

    #[test]
    fn bound_sequence_closed_form() {
        let (h, q) = (0.3, 0.7);
        for (k, rho) in size_bound_sequence(h, q).take(8).enumerate() {
            let n = k + 2;
            let fact: f64 = (1..n).map(|i| i as f64).product();
            let expected =
                (n as f64).powi(n as i32 - 2) / fact * h.powi(n as i32 - 1) * q.powi(n as i32);
            assert!(close(rho, expected, 1e-13));
        }
    }

    #[test]
    fn size_bound_values() {
        let sys = SpinSystem::beg(1, 1.0, 0.0, 2.0, 0.0).unwrap();
        assert_eq!(activity_size_bound(&sys, 3).unwrap(), 0.0);

        let sys = SpinSystem::nearest_neighbor(1, 1, 1.0, 2.0, 1.0).unwrap();
        let h = convergence::h_beta(&sys).unwrap();
        let q = 2.0 * lambda_tilde(&sys) * std::f64::consts::E;
        assert!(close(
            activity_size_bound(&sys, 2).unwrap(),
            h * q * q,
            1e-14
        ));
        assert!(close(
            activity_size_bound(&sys, 3).unwrap(),
            1.5 * h * h * q.powi(3),
            1e-14
        ));
        assert!(activity_size_bound(&sys, 1).is_err());
    }
}

//! Spin systems, their Hamiltonian and the structural assumptions on the
//! pair potential.

mod lattice;
mod potential;

pub use lattice::{Site, SpinConfiguration, Volume};
pub use potential::{CouplingBound, CouplingFn, PairFn, PairPotential, TailCertificate};

use crate::{Error, Result};

/// Relative slack allowed when checking `|V| ≤ J(x, y)` pointwise.
const POINTWISE_SLACK: f64 = 1e-12;

/// A bounded integer spin system with a crystal field at a fixed inverse
/// temperature.
#[derive(Clone, Debug)]
pub struct SpinSystem {
    dim: usize,
    spin_bound: u32,
    crystal_field: f64,
    beta: f64,
    potential: PairPotential,
    coupling: CouplingBound,
}

impl SpinSystem {
    pub fn new(
        dim: usize,
        spin_bound: u32,
        crystal_field: f64,
        beta: f64,
        potential: PairPotential,
        coupling: CouplingBound,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "lattice dimension must be positive".into(),
            ));
        }
        if spin_bound == 0 {
            return Err(Error::InvalidParameter(
                "spin bound N must be at least 1".into(),
            ));
        }
        if !crystal_field.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "crystal field must be finite, got {crystal_field}"
            )));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and nonnegative, got {beta}"
            )));
        }
        if matches!(potential, PairPotential::Beg { .. }) && spin_bound != 1 {
            return Err(Error::InvalidParameter(
                "the BEG potential is defined for N = 1 only".into(),
            ));
        }
        Ok(SpinSystem {
            dim,
            spin_bound,
            crystal_field,
            beta,
            potential,
            coupling,
        })
    }

    /// The Blume-Emery-Griffiths model on `Z^d`, dominated by
    /// `J(x, y) = |V| + |K|` on nearest neighbors.
    pub fn beg(
        dim: usize,
        bilinear: f64,
        biquadratic: f64,
        crystal_field: f64,
        beta: f64,
    ) -> Result<Self> {
        SpinSystem::new(
            dim,
            1,
            crystal_field,
            beta,
            PairPotential::beg(bilinear, biquadratic),
            CouplingBound::nearest_neighbor(bilinear.abs() + biquadratic.abs()),
        )
    }

    /// Ferromagnetic product interaction `-(J₀/N²) σ_x σ_y` on nearest
    /// neighbors of `Z^d`, so that `|V| ≤ J₀` for every spin pair.
    pub fn nearest_neighbor(
        dim: usize,
        spin_bound: u32,
        strength: f64,
        crystal_field: f64,
        beta: f64,
    ) -> Result<Self> {
        let n2 = (spin_bound * spin_bound) as f64;
        let potential = PairPotential::tabulated(move |x, y, sx, sy| {
            if x.is_neighbor(y) {
                -strength / n2 * (sx * sy) as f64
            } else {
                0.0
            }
        });
        SpinSystem::new(
            dim,
            spin_bound,
            crystal_field,
            beta,
            potential,
            CouplingBound::nearest_neighbor(strength),
        )
    }

    /// `-C σ_x σ_y / |x - y|^(d+ε)` on `Z^d`, dominated by `C N² / |x - y|^(d+ε)`.
    pub fn power_law(
        dim: usize,
        spin_bound: u32,
        amplitude: f64,
        decay: f64,
        window: Option<usize>,
        crystal_field: f64,
        beta: f64,
    ) -> Result<Self> {
        let n2 = (spin_bound * spin_bound) as f64;
        SpinSystem::new(
            dim,
            spin_bound,
            crystal_field,
            beta,
            PairPotential::power_law(amplitude, decay),
            CouplingBound::power_law(amplitude.abs() * n2, decay, window),
        )
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        SpinSystem::new(
            self.dim,
            self.spin_bound,
            self.crystal_field,
            beta,
            self.potential.clone(),
            self.coupling.clone(),
        )
    }

    pub fn with_crystal_field(&self, crystal_field: f64) -> Result<Self> {
        SpinSystem::new(
            self.dim,
            self.spin_bound,
            crystal_field,
            self.beta,
            self.potential.clone(),
            self.coupling.clone(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spin_bound(&self) -> u32 {
        self.spin_bound
    }

    pub fn crystal_field(&self) -> f64 {
        self.crystal_field
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn potential(&self) -> &PairPotential {
        &self.potential
    }

    pub fn coupling(&self) -> &CouplingBound {
        &self.coupling
    }

    /// The constant `J` of the coupling: half its supremal row sum.
    pub fn coupling_constant(&self) -> Result<f64> {
        Ok(self.coupling.sup_sum(self.dim)? / 2.0)
    }

    /// Spin values `-N..=N` in increasing order.
    pub fn spin_values(&self) -> impl Iterator<Item = i32> + Clone {
        let n = self.spin_bound as i32;
        -n..=n
    }

    /// Nonzero spin values `±1, …, ±N`.
    pub fn nonzero_spin_values(&self) -> Vec<i32> {
        self.spin_values().filter(|&s| s != 0).collect()
    }
}

/// `V` tabulated on every interacting pair of a volume, indexed by spin values.
#[derive(Clone, Debug)]
pub struct PairTable {
    spin_bound: u32,
    /// `(i, j, V(x_i, x_j, s, t))` for pairs that are not identically zero,
    /// with the values laid out row-major over `s, t ∈ -N..=N`.
    pairs: Vec<(usize, usize, Vec<f64>)>,
}

impl PairTable {
    pub fn new(sys: &SpinSystem, sites: &[Site]) -> Self {
        let n = sys.spin_bound as i32;
        let mut pairs = Vec::new();
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                let values: Vec<f64> = (-n..=n)
                    .flat_map(|s| (-n..=n).map(move |t| (s, t)))
                    .map(|(s, t)| sys.potential.eval(&sites[i], &sites[j], s, t))
                    .collect();
                if values.iter().any(|&v| v != 0.0) {
                    pairs.push((i, j, values));
                }
            }
        }
        PairTable {
            spin_bound: sys.spin_bound,
            pairs,
        }
    }

    pub fn pairs(&self) -> &[(usize, usize, Vec<f64>)] {
        &self.pairs
    }

    #[inline]
    pub fn slot(&self, s: i32, t: i32) -> usize {
        let n = self.spin_bound as i32;
        ((s + n) * (2 * n + 1) + (t + n)) as usize
    }

    /// `Σ_{pairs} V` for spins given in site order.
    pub fn energy(&self, spins: &[i32]) -> f64 {
        self.pairs
            .iter()
            .map(|(i, j, values)| values[self.slot(spins[*i], spins[*j])])
            .sum()
    }
}

/// `H_Λ(σ) = Σ_{{x,y}⊂Λ} V(x, y, σ_x, σ_y) + D Σ_x σ_x²`.
pub fn hamiltonian(sys: &SpinSystem, vol: &Volume, cfg: &SpinConfiguration) -> Result<f64> {
    if cfg.len() != vol.len() {
        return Err(Error::DomainMismatch {
            expected: vol.len(),
            found: cfg.len(),
        });
    }
    let spins = cfg.spins();
    if let Some(&value) = spins.iter().find(|s| s.unsigned_abs() > sys.spin_bound) {
        return Err(Error::SpinOutOfRange {
            value,
            bound: sys.spin_bound,
        });
    }
    let sites = vol.sites();
    let pair: f64 = vol
        .pairs()
        .map(|(i, j)| sys.potential.eval(&sites[i], &sites[j], spins[i], spins[j]))
        .sum();
    let field: f64 = spins.iter().map(|&s| (s * s) as f64).sum();
    Ok(pair + sys.crystal_field * field)
}

/// A violation found while checking a pointwise condition on the potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub x: Site,
    pub y: Site,
    pub sx: i32,
    pub sy: i32,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Checks `V(x, y, σ_x, σ_y) = 0` whenever `σ_x σ_y = 0`, over every pair of
/// the volume, in both site orders.
pub fn validate_assumption_a(sys: &SpinSystem, vol: &Volume) -> Verdict {
    check_zero_spin(sys, vol.sites())
}

pub(crate) fn check_zero_spin(sys: &SpinSystem, sites: &[Site]) -> Verdict {
    for (i, x) in sites.iter().enumerate() {
        for (j, y) in sites.iter().enumerate() {
            if i == j {
                continue;
            }
            for s in sys.spin_values() {
                for (sx, sy) in [(0, s), (s, 0)] {
                    let value = sys.potential.eval(x, y, sx, sy);
                    if value != 0.0 {
                        return Verdict::Fail(Witness {
                            x: x.clone(),
                            y: y.clone(),
                            sx,
                            sy,
                            value,
                        });
                    }
                }
            }
        }
    }
    Verdict::Pass
}

/// Outcome of checking the coupling bound on a volume.
#[derive(Clone, Debug, PartialEq)]
pub struct AssumptionB {
    /// Whether `|V| ≤ J(x, y)` held at every pair of the volume.
    pub pointwise: Verdict,
    /// The certified `2J = sup_x Σ_{y≠x} J(x, y)`.
    pub two_j: f64,
}

impl AssumptionB {
    pub fn coupling_constant(&self) -> f64 {
        self.two_j / 2.0
    }
}

/// Checks `|V(x, y, σ_x, σ_y)| ≤ J(x, y)` over the volume and evaluates the
/// supremal coupling sum together with its tail certificate.
pub fn validate_assumption_b(sys: &SpinSystem, vol: &Volume) -> Result<AssumptionB> {
    let two_j = sys.coupling.sup_sum(sys.dim)?;
    let sites = vol.sites();
    let mut pointwise = Verdict::Pass;
    'outer: for (i, j) in vol.pairs() {
        let (x, y) = (&sites[i], &sites[j]);
        let bound = sys.coupling.value(x, y);
        for sx in sys.spin_values() {
            for sy in sys.spin_values() {
                let value = sys.potential.eval(x, y, sx, sy);
                if value.abs() > bound * (1.0 + POINTWISE_SLACK) {
                    pointwise = Verdict::Fail(Witness {
                        x: x.clone(),
                        y: y.clone(),
                        sx,
                        sy,
                        value,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(AssumptionB { pointwise, two_j })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_chain() -> Volume {
        Volume::chain(2).unwrap()
    }

    #[test]
    fn zero_configuration_has_zero_energy() {
        let sys = SpinSystem::beg(2, 1.3, -0.7, 2.0, 1.0).unwrap();
        let vol = Volume::cuboid(&[2, 3]).unwrap();
        let h = hamiltonian(&sys, &vol, &SpinConfiguration::zeros(6)).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn beg_two_site_values() {
        let sys = SpinSystem::beg(1, 1.0, 0.0, 2.0, 1.0).unwrap();
        let h = hamiltonian(&sys, &pair_chain(), &vec![1, 1].into()).unwrap();
        assert_eq!(h, 3.0);

        let sys = SpinSystem::beg(1, 1.0, 0.5, 0.0, 1.0).unwrap();
        let h = hamiltonian(&sys, &pair_chain(), &vec![1, -1].into()).unwrap();
        assert_eq!(h, 1.5);
    }

    #[test]
    fn domain_and_range_errors() {
        let sys = SpinSystem::beg(1, 1.0, 0.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            hamiltonian(&sys, &pair_chain(), &vec![1].into()),
            Err(Error::DomainMismatch {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            hamiltonian(&sys, &pair_chain(), &vec![2, 0].into()),
            Err(Error::SpinOutOfRange { value: 2, bound: 1 })
        ));
    }

    #[test]
    fn beg_requires_spin_one() {
        let err = SpinSystem::new(
            1,
            2,
            1.0,
            1.0,
            PairPotential::beg(1.0, 0.0),
            CouplingBound::nearest_neighbor(1.0),
        );
        assert!(err.is_err());
    }

    #[test]
    fn assumption_a_verdicts() {
        let vol = Volume::cuboid(&[2, 2]).unwrap();
        let beg = SpinSystem::beg(2, 1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(validate_assumption_a(&beg, &vol).passed());

        let pl = SpinSystem::power_law(2, 2, 1.0, 1.0, Some(4), 1.0, 1.0).unwrap();
        assert!(validate_assumption_a(&pl, &vol).passed());

        let bad = SpinSystem::new(
            1,
            1,
            1.0,
            1.0,
            PairPotential::tabulated(|_, _, sx, sy| if sx == 0 && sy == 1 { 0.1 } else { 0.0 }),
            CouplingBound::nearest_neighbor(1.0),
        )
        .unwrap();
        match validate_assumption_a(&bad, &pair_chain()) {
            Verdict::Fail(w) => {
                assert_eq!((w.sx, w.sy), (0, 1));
                assert_eq!(w.value, 0.1);
            }
            Verdict::Pass => panic!("violation not detected"),
        }
    }

    #[test]
    fn assumption_b_beg_square_lattice() {
        let sys = SpinSystem::beg(2, 1.0, 0.5, 1.0, 1.0).unwrap();
        let vol = Volume::cuboid(&[3, 3]).unwrap();
        let b = validate_assumption_b(&sys, &vol).unwrap();
        assert!(b.pointwise.passed());
        assert_eq!(b.two_j, 6.0);
        assert_eq!(b.coupling_constant(), 3.0);
    }

    #[test]
    fn assumption_b_nearest_neighbor_coordination() {
        for d in 1..=3 {
            let sys = SpinSystem::nearest_neighbor(d, 2, 0.7, 1.0, 1.0).unwrap();
            let vol = Volume::cuboid(&vec![2; d]).unwrap();
            let b = validate_assumption_b(&sys, &vol).unwrap();
            assert!(b.pointwise.passed());
            assert!((b.two_j - 2.0 * d as f64 * 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn assumption_b_detects_undersized_coupling() {
        let sys = SpinSystem::new(
            1,
            1,
            1.0,
            1.0,
            PairPotential::beg(1.0, 0.5),
            CouplingBound::nearest_neighbor(1.0),
        )
        .unwrap();
        let b = validate_assumption_b(&sys, &pair_chain()).unwrap();
        assert!(!b.pointwise.passed());
    }

    #[test]
    fn assumption_b_divergent_power_law() {
        let sys = SpinSystem::power_law(1, 1, 1.0, -0.5, Some(8), 1.0, 1.0).unwrap();
        assert!(matches!(
            validate_assumption_b(&sys, &pair_chain()),
            Err(Error::DivergentTail { .. })
        ));
        let sys = SpinSystem::power_law(1, 1, 1.0, 1.0, None, 1.0, 1.0).unwrap();
        assert!(matches!(
            validate_assumption_b(&sys, &pair_chain()),
            Err(Error::MissingTailCertificate)
        ));
    }

    #[test]
    fn global_flip_symmetry_beg() {
        let sys = SpinSystem::beg(2, 0.8, -0.3, 0.4, 1.0).unwrap();
        let vol = Volume::cuboid(&[2, 2]).unwrap();
        for cfg in SpinConfiguration::all(4, 1) {
            let a = hamiltonian(&sys, &vol, &cfg).unwrap();
            let b = hamiltonian(&sys, &vol, &cfg.flipped()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_state_is_unique_ground_state_when_field_exceeds_coupling() {
        // D > J: every nonzero configuration has strictly positive energy.
        let cases = [
            (
                SpinSystem::beg(1, 1.0, 0.5, 1.6, 1.0).unwrap(),
                Volume::chain(8).unwrap(),
            ),
            (
                SpinSystem::beg(2, 1.0, -0.5, 3.1, 1.0).unwrap(),
                Volume::cuboid(&[2, 4]).unwrap(),
            ),
        ];
        for (sys, vol) in cases {
            let j = validate_assumption_b(&sys, &vol)
                .unwrap()
                .coupling_constant();
            assert!(sys.crystal_field() > j);
            for cfg in SpinConfiguration::all(vol.len(), 1) {
                if cfg.spins().iter().all(|&s| s == 0) {
                    continue;
                }
                assert!(hamiltonian(&sys, &vol, &cfg).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn pair_table_matches_hamiltonian() {
        let sys = SpinSystem::power_law(1, 2, 0.9, 1.0, Some(4), 0.3, 1.0).unwrap();
        let vol = Volume::chain(4).unwrap();
        let table = PairTable::new(&sys, vol.sites());
        for cfg in SpinConfiguration::all(4, 2).step_by(37) {
            let field: f64 = cfg.spins().iter().map(|&s| (s * s) as f64).sum();
            let direct = hamiltonian(&sys, &vol, &cfg).unwrap();
            let tabled = table.energy(cfg.spins()) + 0.3 * field;
            assert!((direct - tabled).abs() < 1e-12);
        }
    }
}

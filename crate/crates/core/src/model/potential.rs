use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use super::Site;
use crate::{Error, Result};

pub type PairFn = Arc<dyn Fn(&Site, &Site, i32, i32) -> f64 + Send + Sync>;
pub type CouplingFn = Arc<dyn Fn(&Site, &Site) -> f64 + Send + Sync>;

/// The pair interaction `V(x, y, σ_x, σ_y)`.
#[derive(Clone)]
pub enum PairPotential {
    /// `-V σ_x σ_y + K σ_x² σ_y²` on nearest neighbors, zero otherwise.
    Beg {
        bilinear: f64,
        biquadratic: f64,
    },
    /// `-C σ_x σ_y / |x - y|^(d + ε)`, with `d` the site dimension.
    PowerLaw {
        amplitude: f64,
        decay: f64,
    },
    Tabulated(PairFn),
}

impl PairPotential {
    pub fn beg(bilinear: f64, biquadratic: f64) -> Self {
        PairPotential::Beg {
            bilinear,
            biquadratic,
        }
    }

    pub fn power_law(amplitude: f64, decay: f64) -> Self {
        PairPotential::PowerLaw { amplitude, decay }
    }

    pub fn tabulated(f: impl Fn(&Site, &Site, i32, i32) -> f64 + Send + Sync + 'static) -> Self {
        PairPotential::Tabulated(Arc::new(f))
    }

    pub fn zero() -> Self {
        PairPotential::beg(0.0, 0.0)
    }

    pub fn eval(&self, x: &Site, y: &Site, sx: i32, sy: i32) -> f64 {
        match self {
            PairPotential::Beg {
                bilinear,
                biquadratic,
            } => {
                if !x.is_neighbor(y) {
                    return 0.0;
                }
                let p = (sx * sy) as f64;
                -bilinear * p + biquadratic * p * p
            }
            PairPotential::PowerLaw { amplitude, decay } => {
                if sx == 0 || sy == 0 {
                    return 0.0;
                }
                let r = x.euclidean(y);
                -amplitude * (sx * sy) as f64 / r.powf(x.dim() as f64 + decay)
            }
            PairPotential::Tabulated(f) => f(x, y, sx, sy),
        }
    }
}

impl fmt::Debug for PairPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairPotential::Beg {
                bilinear,
                biquadratic,
            } => write!(f, "Beg(V={bilinear}, K={biquadratic})"),
            PairPotential::PowerLaw { amplitude, decay } => {
                write!(f, "PowerLaw(C={amplitude}, eps={decay})")
            }
            PairPotential::Tabulated(_) => f.write_str("Tabulated"),
        }
    }
}

/// A certified bound on the part of a coupling sum that lies outside a finite
/// window around the site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailCertificate {
    /// Sup-norm radius of the window summed explicitly.
    pub radius: usize,
    /// Upper bound on `Σ J(x, y)` over sites outside the window.
    pub bound: f64,
}

/// The dominating coupling `J(x, y) ≥ |V(x, y, ·, ·)|`.
#[derive(Clone)]
pub enum CouplingBound {
    /// `J(x, y) = strength` on nearest neighbors of `Z^d`.
    NearestNeighbor { strength: f64 },
    /// `J(x, y) = amplitude / |x - y|^(d + decay)` on `Z^d`, summed explicitly
    /// over the sup-norm window of radius `window`.
    PowerLaw {
        amplitude: f64,
        decay: f64,
        window: Option<usize>,
    },
    /// An arbitrary coupling on an explicit finite site set, with a declared
    /// bound for whatever lies beyond it.
    Tabulated {
        sites: Vec<Site>,
        func: CouplingFn,
        tail: Option<f64>,
    },
}

impl CouplingBound {
    pub fn nearest_neighbor(strength: f64) -> Self {
        CouplingBound::NearestNeighbor { strength }
    }

    pub fn power_law(amplitude: f64, decay: f64, window: Option<usize>) -> Self {
        CouplingBound::PowerLaw {
            amplitude,
            decay,
            window,
        }
    }

    pub fn tabulated(
        sites: Vec<Site>,
        func: impl Fn(&Site, &Site) -> f64 + Send + Sync + 'static,
        tail: Option<f64>,
    ) -> Self {
        CouplingBound::Tabulated {
            sites,
            func: Arc::new(func),
            tail,
        }
    }

    pub fn value(&self, x: &Site, y: &Site) -> f64 {
        match self {
            CouplingBound::NearestNeighbor { strength } => {
                if x.is_neighbor(y) {
                    *strength
                } else {
                    0.0
                }
            }
            CouplingBound::PowerLaw {
                amplitude, decay, ..
            } => {
                if x == y {
                    0.0
                } else {
                    amplitude / x.euclidean(y).powf(x.dim() as f64 + decay)
                }
            }
            CouplingBound::Tabulated { func, .. } => func(x, y),
        }
    }

    /// Tail certificate for the coupling on `Z^d`.
    ///
    /// For the power law, shells `|y|_∞ = m` hold at most `2d (2m+1)^(d-1)`
    /// sites at Euclidean distance `≥ m`, so the tail beyond radius `M` is at
    /// most `amplitude · 2d · 3^(d-1) · M^(-ε) / ε`.
    pub fn tail_certificate(&self, dim: usize) -> Result<TailCertificate> {
        match self {
            CouplingBound::NearestNeighbor { .. } => Ok(TailCertificate {
                radius: 1,
                bound: 0.0,
            }),
            CouplingBound::PowerLaw {
                amplitude,
                decay,
                window,
            } => {
                if *decay <= 0.0 {
                    return Err(Error::DivergentTail { decay: *decay });
                }
                let radius = window.ok_or(Error::MissingTailCertificate)?.max(1);
                let d = dim as f64;
                let bound = amplitude.abs()
                    * 2.0
                    * d
                    * 3f64.powi(dim as i32 - 1)
                    * (radius as f64).powf(-decay)
                    / decay;
                Ok(TailCertificate { radius, bound })
            }
            CouplingBound::Tabulated { sites, tail, .. } => {
                let bound = tail.ok_or(Error::MissingTailCertificate)?;
                Ok(TailCertificate {
                    radius: sites.len(),
                    bound,
                })
            }
        }
    }

    /// `sup_x Σ_{y≠x} g(J(x, y))` for a nondecreasing `g` with `g(0) = 0` and
    /// `g(t) ≤ slope · t`, evaluated as an explicit window sum plus
    /// `slope × tail bound`.
    fn sup_sum_with(&self, dim: usize, g: impl Fn(f64) -> f64, slope: f64) -> Result<f64> {
        let cert = self.tail_certificate(dim)?;
        let window = match self {
            CouplingBound::NearestNeighbor { strength } => 2.0 * dim as f64 * g(*strength),
            CouplingBound::PowerLaw { .. } => {
                let origin = Site::new(vec![0; dim]);
                let r = cert.radius as i64;
                (0..dim)
                    .map(|_| -r..=r)
                    .multi_cartesian_product()
                    .map(Site::new)
                    .filter(|y| *y != origin)
                    .map(|y| g(self.value(&origin, &y)))
                    .sum()
            }
            CouplingBound::Tabulated { sites, .. } => sites
                .iter()
                .map(|x| {
                    sites
                        .iter()
                        .filter(|y| *y != x)
                        .map(|y| g(self.value(x, y)))
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
        };
        Ok(window + slope * cert.bound)
    }

    /// `2J = sup_x Σ_{y≠x} J(x, y)`.
    pub fn sup_sum(&self, dim: usize) -> Result<f64> {
        self.sup_sum_with(dim, |t| t, 1.0)
    }

    /// `h(β, J) = sup_x Σ_{y≠x} (1 - e^{-β J(x, y)})`.
    pub fn h(&self, dim: usize, beta: f64) -> Result<f64> {
        self.sup_sum_with(dim, |t| -(-beta * t).exp_m1(), beta)
    }
}

impl fmt::Debug for CouplingBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingBound::NearestNeighbor { strength } => write!(f, "NearestNeighbor({strength})"),
            CouplingBound::PowerLaw {
                amplitude,
                decay,
                window,
            } => write!(f, "PowerLaw(A={amplitude}, eps={decay}, window={window:?})"),
            CouplingBound::Tabulated { sites, tail, .. } => {
                write!(f, "Tabulated({} sites, tail={tail:?})", sites.len())
            }
        }
    }
}

impl fmt::Display for CouplingBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingBound::NearestNeighbor { strength } => write!(f, "nearest_neighbor:{strength}"),
            CouplingBound::PowerLaw {
                amplitude,
                decay,
                window,
            } => match window {
                Some(w) => write!(f, "power_law:{amplitude}:{decay}:window={w}"),
                None => write!(f, "power_law:{amplitude}:{decay}"),
            },
            CouplingBound::Tabulated { sites, .. } => write!(f, "tabulated:{}", sites.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beg_values() {
        let v = PairPotential::beg(1.0, 0.5);
        let (a, b) = (Site::index(0), Site::index(1));
        assert_eq!(v.eval(&a, &b, 1, -1), 1.5);
        assert_eq!(v.eval(&a, &b, 1, 1), -0.5);
        assert_eq!(v.eval(&a, &Site::index(2), 1, 1), 0.0);
        assert_eq!(v.eval(&a, &b, 0, 1), 0.0);
    }

    #[test]
    fn nearest_neighbor_sup_sum() {
        let c = CouplingBound::nearest_neighbor(1.5);
        assert_eq!(c.sup_sum(2).unwrap(), 6.0);
        assert_eq!(c.sup_sum(3).unwrap(), 9.0);
        let h = c.h(2, 0.4).unwrap();
        assert!((h - 4.0 * (1.0 - (-0.6f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn power_law_tail_bound_dominates_far_window() {
        // The certificate at radius 4 must cover the explicit sum between
        // radius 4 and radius 40.
        let c4 = CouplingBound::power_law(1.0, 1.0, Some(4));
        let c40 = CouplingBound::power_law(1.0, 1.0, Some(40));
        for dim in [1, 2] {
            let cert = c4.tail_certificate(dim).unwrap();
            let inner4 = c4.sup_sum(dim).unwrap() - cert.bound;
            let cert40 = c40.tail_certificate(dim).unwrap();
            let inner40 = c40.sup_sum(dim).unwrap() - cert40.bound;
            assert!(inner40 - inner4 <= cert.bound);
            assert!(c40.sup_sum(dim).unwrap() <= c4.sup_sum(dim).unwrap());
        }
    }

    #[test]
    fn power_law_one_dimensional_zeta() {
        // Σ_{y≠0} 1/|y|^2 over Z is π²/3.
        let c = CouplingBound::power_law(1.0, 1.0, Some(2000));
        let s = c.sup_sum(1).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 3.0;
        assert!(s >= exact);
        assert!(s - exact < 2e-3);
    }

    #[test]
    fn nonpositive_decay_diverges() {
        let c = CouplingBound::power_law(1.0, 0.0, Some(10));
        assert!(matches!(c.sup_sum(1), Err(Error::DivergentTail { .. })));
        let c = CouplingBound::power_law(1.0, 1.0, None);
        assert!(matches!(c.sup_sum(1), Err(Error::MissingTailCertificate)));
    }
}

//! Convergence of the polymer expansion.
//!
//! Three checks of decreasing sharpness are provided, each implying the next
//! weaker one's conclusion:
//!
//! - [`criterion_numeric`]: the numeric convergence condition
//!   `inf_{a>0} (e^a - 1)^{-1} Σ_{n≥2} e^{an} ρ_n ≤ 1`, with `ρ_n` either the
//!   analytic activity bound or measured finite-volume sups;
//! - [`criterion_closed_form`]: `e^{(D-J)β} F(β) ≥ h(β, J)`;
//! - [`criterion_crude`]: `e^{(D-J)β} ≥ (12N + 32N²) β J`.
//!
//! [`find_beta_intervals`] scans `β` for the high- and low-temperature
//! analyticity intervals `[0, β₁]` and `[β₂, ∞)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::SpinSystem;
use crate::polymers::{self, ActivityTable};
use crate::{Error, Result};

/// `h(β, J) = sup_x Σ_{y≠x} (1 - e^{-β J(x,y)})`, window sum plus `β ×` tail bound.
pub fn h_beta(sys: &SpinSystem) -> Result<f64> {
    sys.coupling().h(sys.dim(), sys.beta())
}

fn f_of_parts(n: f64, weight: f64, gap_decay: f64) -> f64 {
    0.5 * weight * weight / (8.0 * n * n * gap_decay + 3.0 * n * weight)
}

/// `F(β) = ½ W² / (8N² e^{-(D-J)β} + 3N W)` with `W = 1 + 2 Σ_k e^{-βDk²}`.
pub fn f_of_beta(sys: &SpinSystem) -> Result<f64> {
    let j = sys.coupling_constant()?;
    let gap = sys.crystal_field() - j;
    Ok(f_of_parts(
        sys.spin_bound() as f64,
        polymers::single_site_weight(sys),
        (-gap * sys.beta()).exp(),
    ))
}

/// Both sides of `e^{(D-J)β} F(β) ≥ h(β, J)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn criterion_closed_form(sys: &SpinSystem) -> Result<ClosedForm> {
    let j = sys.coupling_constant()?;
    let growth = ((sys.crystal_field() - j) * sys.beta()).exp();
    let lhs = growth * f_of_beta(sys)?;
    let rhs = h_beta(sys)?;
    Ok(ClosedForm {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// `e^{(D-J)β} ≥ (12N + 32N²) β J`: the closed form with `h ≤ 2βJ` and
/// `F ≥ 1/(6N + 16N²)`.
pub fn criterion_crude(sys: &SpinSystem) -> Result<bool> {
    let j = sys.coupling_constant()?;
    let n = sys.spin_bound() as f64;
    let beta = sys.beta();
    Ok(((sys.crystal_field() - j) * beta).exp() >= (12.0 * n + 32.0 * n * n) * beta * j)
}

/// `(1 + (12N + 32N²)/e) J`, above which the crude criterion holds at every `β`.
pub fn dc_upper(spin_bound: u32, j: f64) -> f64 {
    let n = spin_bound as f64;
    (1.0 + (12.0 * n + 32.0 * n * n) / std::f64::consts::E) * j
}

/// Size-resolved activity sums `ρ_n ≥ sup_x Σ_{R∋x,|R|=n} |ζ(R)|`.
pub trait SizeMoments: Sync {
    /// `ln ρ_2, ln ρ_3, …` (`-∞` for vanishing moments).
    fn log_moments(&self) -> Box<dyn Iterator<Item = f64> + '_>;
    /// Largest `n` with `ρ_n` possibly nonzero, when finite.
    fn max_size(&self) -> Option<usize>;
    /// A constant `r` with `ρ_{n+1} ≤ r ρ_n` for every `n`; only consulted when
    /// `max_size` is `None`.
    fn ratio_bound(&self) -> f64;
}

/// The analytic bound `ρ_n = n^{n-2}/(n-1)! h^{n-1} q^n`.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticMoments {
    pub h: f64,
    pub q: f64,
}

impl AnalyticMoments {
    pub fn of(sys: &SpinSystem) -> Result<Self> {
        Ok(AnalyticMoments {
            h: h_beta(sys)?,
            q: polymers::site_factor(sys)?,
        })
    }
}

impl SizeMoments for AnalyticMoments {
    fn log_moments(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        let (lh, lq) = (self.h.ln(), self.q.ln());
        let mut n = 2usize;
        let mut value = lh + 2.0 * lq;
        Box::new(std::iter::from_fn(move || {
            let current = value;
            let k = n as f64;
            value += (k - 1.0) * ((k + 1.0) / k).ln() + lh + lq;
            n += 1;
            Some(current)
        }))
    }

    fn max_size(&self) -> Option<usize> {
        None
    }

    fn ratio_bound(&self) -> f64 {
        std::f64::consts::E * self.h * self.q
    }
}

/// Finite list `ρ_2, …, ρ_m`.
#[derive(Clone, Debug)]
pub struct TabulatedMoments(pub Vec<f64>);

impl TabulatedMoments {
    pub fn of(table: &ActivityTable) -> Self {
        TabulatedMoments(table.size_sups().into_iter().skip(2).collect())
    }
}

impl SizeMoments for TabulatedMoments {
    fn log_moments(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        Box::new(self.0.iter().map(|r| r.ln()))
    }

    fn max_size(&self) -> Option<usize> {
        Some(self.0.len() + 1)
    }

    fn ratio_bound(&self) -> f64 {
        0.0
    }
}

/// Geometric moments `ρ_n = c^n`.
#[derive(Clone, Copy, Debug)]
pub struct GeometricMoments(pub f64);

impl SizeMoments for GeometricMoments {
    fn log_moments(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        let lc = self.0.ln();
        Box::new((2..).map(move |n| n as f64 * lc))
    }

    fn max_size(&self) -> Option<usize> {
        None
    }

    fn ratio_bound(&self) -> f64 {
        self.0
    }
}

/// Largest `a` scanned for finite moment lists.
const A_CAP: f64 = 50.0;
const SERIES_RTOL: f64 = 1e-14;
const MAX_SERIES_TERMS: usize = 1_000_000;
const GRID_POINTS: usize = 128;

/// Upper bound on `Σ_{n≥2} e^{an} ρ_n`: partial sum plus a geometric bound on
/// the remainder. Summation stops early once the partial sum exceeds `cap`,
/// returning that partial sum, which is then only a lower bound.
fn series_upper(moments: &dyn SizeMoments, a: f64, cap: f64) -> f64 {
    let mut sum = 0.0;
    match moments.max_size() {
        Some(m) => {
            for (k, lr) in moments.log_moments().take(m.saturating_sub(1)).enumerate() {
                sum += (a * (k + 2) as f64 + lr).exp();
            }
            sum
        }
        None => {
            let ratio = a.exp() * moments.ratio_bound();
            if ratio >= 1.0 {
                return f64::INFINITY;
            }
            for (k, lr) in moments.log_moments().take(MAX_SERIES_TERMS).enumerate() {
                let term = (a * (k + 2) as f64 + lr).exp();
                sum += term;
                let remainder = term * ratio / (1.0 - ratio);
                if remainder <= SERIES_RTOL * sum
                    || (term == 0.0 && sum == 0.0)
                    || k + 1 == MAX_SERIES_TERMS
                {
                    return sum + remainder;
                }
                if sum > cap {
                    return sum;
                }
            }
            sum
        }
    }
}

/// `(e^a - 1)^{-1} Σ e^{an} ρ_n`, exact up to rounding when at most `cap`;
/// otherwise some value above `cap`.
fn objective(moments: &dyn SizeMoments, a: f64, cap: f64) -> f64 {
    let scale = a.exp_m1();
    let s = series_upper(moments, a, cap * scale);
    if s == 0.0 {
        0.0
    } else {
        s / scale
    }
}

/// Outcome of the infimum search in the numeric convergence condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericOutcome {
    pub holds: bool,
    /// Best `a` found, absent when no `a > 0` makes the series converge.
    pub a: Option<f64>,
    /// Objective at `a` (an upper bound on the true value there).
    pub value: f64,
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi.abs().max(1e-12) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `inf_{a>0} (e^a - 1)^{-1} Σ_{n≥2} e^{an} ρ_n ≤ 1`, searched over a grid
/// dense near both ends of `(0, a_max)` and refined by golden section.
pub fn series_infimum(moments: &dyn SizeMoments) -> NumericOutcome {
    let a_max = match moments.max_size() {
        Some(_) => A_CAP,
        None => {
            let r = moments.ratio_bound();
            if r <= 0.0 {
                A_CAP
            } else {
                (-r.ln()).min(A_CAP)
            }
        }
    };
    if !(a_max > 0.0) {
        return NumericOutcome {
            holds: false,
            a: None,
            value: f64::INFINITY,
        };
    }
    // Log-dense towards both ends; near `a_max` the remainder converges too
    // slowly for closer points to pay off.
    let half = GRID_POINTS / 2;
    let spread =
        |depth: f64, k: usize| 0.5 * a_max * depth.powf(1.0 - k as f64 / (half - 1) as f64);
    let mut grid: Vec<f64> = (0..half).map(|k| spread(1e-9, k)).collect();
    grid.extend((0..half - 1).rev().map(|k| a_max - spread(1e-4, k)));
    let (mut best, mut best_value) = (0, f64::INFINITY);
    for (i, &a) in grid.iter().enumerate() {
        let v = objective(moments, a, best_value);
        if v < best_value {
            (best, best_value) = (i, v);
        }
    }
    let (mut a, mut value) = (grid[best], best_value);
    if value.is_finite() {
        let lo = if best == 0 { 0.0 } else { grid[best - 1] };
        let hi = if best + 1 == grid.len() {
            a_max
        } else {
            grid[best + 1]
        };
        let (ra, rv) = golden_section(|x| objective(moments, x, value.max(1.0)), lo, hi);
        if rv < value {
            a = ra;
            value = rv;
        }
    }
    NumericOutcome {
        holds: value <= 1.0,
        a: value.is_finite().then_some(a),
        value,
    }
}

/// Source of the `ρ_n` in [`criterion_numeric`].
#[derive(Clone, Copy, Debug)]
pub enum BoundMode<'a> {
    /// The analytic activity bound.
    Analytic,
    /// Finite-volume sups measured from an exact activity table.
    Table(&'a ActivityTable),
}

pub fn criterion_numeric(sys: &SpinSystem, mode: BoundMode<'_>) -> Result<NumericOutcome> {
    Ok(match mode {
        BoundMode::Analytic => series_infimum(&AnalyticMoments::of(sys)?),
        BoundMode::Table(table) => series_infimum(&TabulatedMoments::of(table)),
    })
}

/// A uniform `β` grid with bisection refinement of the interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub beta_min: f64,
    pub beta_max: f64,
    pub step: f64,
    pub refine_tol: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            beta_min: 0.0,
            beta_max: 50.0,
            step: 0.01,
            refine_tol: 1e-6,
        }
    }
}

impl ScanGrid {
    pub fn new(beta_min: f64, beta_max: f64, step: f64) -> Result<Self> {
        let grid = ScanGrid {
            beta_min,
            beta_max,
            step,
            ..ScanGrid::default()
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta_min >= 0.0
            && self.beta_max > self.beta_min
            && self.step > 0.0
            && self.refine_tol > 0.0)
            || !self.beta_max.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "invalid beta grid {self:?}"
            )));
        }
        if (self.beta_max - self.beta_min) / self.step > 1e7 {
            return Err(Error::Budget {
                what: "beta grid points",
                requested: ((self.beta_max - self.beta_min) / self.step) as usize,
                limit: 10_000_000,
            });
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let steps = ((self.beta_max - self.beta_min) / self.step + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=steps)
            .map(|i| self.beta_min + i as f64 * self.step)
            .collect();
        if *pts.last().unwrap() < self.beta_max - 1e-12 {
            pts.push(self.beta_max);
        }
        pts
    }
}

/// Endpoints of the analyticity intervals certified by the closed-form
/// criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaIntervals {
    /// The criterion holds on `[beta_min, beta1]`.
    pub beta1: Option<f64>,
    /// The criterion holds on `[beta2, ∞)`.
    pub beta2: Option<f64>,
    /// The criterion holds at every `β ≥ beta_min`.
    pub all_beta: bool,
}

/// Whether the closed-form criterion provably holds on `[β, ∞)` given that
/// `D > J`, using `h ≤ 2βJ` and the lower bound
/// `F(β') ≥ ½ / (8N² e^{-(D-J)β} + 3N W(β))` for `β' ≥ β`.
pub fn tail_certified(sys: &SpinSystem) -> Result<bool> {
    let j = sys.coupling_constant()?;
    let gap = sys.crystal_field() - j;
    if !(gap > 0.0) {
        return Ok(false);
    }
    let beta = sys.beta();
    let n = sys.spin_bound() as f64;
    let f_low =
        0.5 / (8.0 * n * n * (-gap * beta).exp() + 3.0 * n * polymers::single_site_weight(sys));
    let growth = (gap * beta).exp() * f_low;
    Ok(growth >= 2.0 * beta * j && gap * growth >= 2.0 * j)
}

/// Bisects between a point where `pred` holds and one where it fails; returns
/// the last point known to hold.
fn refine(
    pred: impl Fn(f64) -> Result<bool>,
    mut good: f64,
    mut bad: f64,
    tol: f64,
) -> Result<f64> {
    while (good - bad).abs() > tol {
        let mid = 0.5 * (good + bad);
        if pred(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

fn intervals_from_verdicts(
    sys: &SpinSystem,
    grid: &ScanGrid,
    betas: &[f64],
    holds: &[bool],
) -> Result<BetaIntervals> {
    let pred = |b: f64| Ok(criterion_closed_form(&sys.with_beta(b)?)?.holds);
    let last = betas.len() - 1;
    let certified = tail_certified(&sys.with_beta(grid.beta_max)?)?;
    let (first_fail, last_fail) = match (
        holds.iter().position(|h| !h),
        holds.iter().rposition(|h| !h),
    ) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return Ok(BetaIntervals {
                beta1: (!certified).then_some(grid.beta_max),
                beta2: None,
                all_beta: certified,
            })
        }
    };
    let beta1 = match first_fail {
        0 => None,
        f => Some(refine(pred, betas[f - 1], betas[f], grid.refine_tol)?),
    };
    let beta2 = if last_fail < last && certified {
        Some(refine(
            pred,
            betas[last_fail + 1],
            betas[last_fail],
            grid.refine_tol,
        )?)
    } else {
        None
    };
    Ok(BetaIntervals {
        beta1,
        beta2,
        all_beta: false,
    })
}

/// Locates `β₁` and `β₂` for the system's `N`, `D` and coupling, ignoring its
/// own `β`.
pub fn find_beta_intervals(sys: &SpinSystem, grid: &ScanGrid) -> Result<BetaIntervals> {
    grid.validate()?;
    let betas = grid.points();
    let holds = betas
        .par_iter()
        .map(|&b| Ok(criterion_closed_form(&sys.with_beta(b)?)?.holds))
        .collect::<Result<Vec<bool>>>()?;
    intervals_from_verdicts(sys, grid, &betas, &holds)
}

/// One grid point of a convergence scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub beta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub closed_form: bool,
    pub numeric: bool,
    pub crude: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(rename = "N")]
    pub spin_bound: u32,
    #[serde(rename = "D")]
    pub crystal_field: f64,
    #[serde(rename = "J")]
    pub coupling_constant: f64,
    pub coupling: String,
}

/// Per-`β` verdicts of all three criteria plus the interval endpoints and the
/// crystal-field threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub params: ReportParams,
    pub grid: ScanGrid,
    pub rows: Vec<ScanRow>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub all_beta: bool,
    #[serde(rename = "Dc_upper")]
    pub dc_upper: f64,
}

pub fn evaluate_point(sys: &SpinSystem) -> Result<ScanRow> {
    let closed = criterion_closed_form(sys)?;
    Ok(ScanRow {
        beta: sys.beta(),
        lhs: closed.lhs,
        rhs: closed.rhs,
        closed_form: closed.holds,
        numeric: criterion_numeric(sys, BoundMode::Analytic)?.holds,
        crude: criterion_crude(sys)?,
    })
}

pub fn scan(sys: &SpinSystem, grid: &ScanGrid) -> Result<ConvergenceReport> {
    grid.validate()?;
    let betas = grid.points();
    let rows = betas
        .par_iter()
        .map(|&b| evaluate_point(&sys.with_beta(b)?))
        .collect::<Result<Vec<_>>>()?;
    let holds: Vec<bool> = rows.iter().map(|r| r.closed_form).collect();
    let intervals = intervals_from_verdicts(sys, grid, &betas, &holds)?;
    let j = sys.coupling_constant()?;
    Ok(ConvergenceReport {
        params: ReportParams {
            spin_bound: sys.spin_bound(),
            crystal_field: sys.crystal_field(),
            coupling_constant: j,
            coupling: sys.coupling().to_string(),
        },
        grid: *grid,
        rows,
        beta1: intervals.beta1,
        beta2: intervals.beta2,
        all_beta: intervals.all_beta,
        dc_upper: dc_upper(sys.spin_bound(), j),
    })
}

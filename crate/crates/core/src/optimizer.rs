//! Design-parameter search against the analytical engine.
//!
//! [`optimal_mu`] maximizes a success-probability evaluator over the IN range
//! coefficient; [`min_density_ratio`] finds the smallest `ρ = λ_b/λ_u` meeting a
//! target success probability.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::ps_analytic;
use crate::error::{Error, Result};
use crate::params::NetworkConfig;

pub const DEFAULT_MU_MAX: f64 = 4.0;
pub const MU_GRID_STEP: f64 = 0.1;
pub const MU_TOLERANCE: f64 = 0.01;
pub const DEFAULT_RHO_FLOOR: f64 = 1.0 / 64.0;
pub const DEFAULT_RHO_CAP: f64 = 32.0;
/// Bisection stops once the bracket `[lo, hi]` satisfies `hi / lo <= 1 + RHO_RELATIVE_PRECISION`.
pub const RHO_RELATIVE_PRECISION: f64 = 0.01;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    /// `μ*` or `ρ_min`.
    pub argmax: f64,
    /// Success probability at `argmax`; for an infeasible search, the best value found.
    pub value: f64,
    /// Every evaluation made, sorted by parameter.
    pub trace: Vec<(f64, f64)>,
    pub feasible: bool,
}

fn eval_at<F: Fn(f64) -> Result<f64>>(f: &F, x: f64) -> Result<f64> {
    f(x).map_err(|e| Error::Evaluator { param: x, source: Box::new(e) })
}

fn sorted_trace(mut trace: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    trace.sort_by(|a, b| a.0.total_cmp(&b.0));
    trace.dedup_by(|a, b| a.0 == b.0);
    trace
}

/// Decimal grid `1.0, 1.1, ...` up to `mu_max`, which is appended when off-grid.
pub fn mu_grid(mu_max: f64) -> Vec<f64> {
    let steps = ((mu_max - 1.0) / MU_GRID_STEP + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|i| (10 + i) as f64 / 10.0).collect();
    if mu_max - grid[grid.len() - 1] > 1e-9 {
        grid.push(mu_max);
    }
    grid
}

/// Maximizes `evaluator` over `μ ∈ [1, mu_max]`.
///
/// A 0.1-step grid is evaluated first (concurrently); golden-section search then
/// refines inside the two grid cells around the best grid point until the
/// bracket is narrower than 0.01. Ties on the grid go to the smaller `μ`. If the
/// refined point is worse than the grid maximum, the grid maximum is returned.
pub fn optimal_mu<F>(mu_max: f64, evaluator: F) -> Result<OptimizationResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(mu_max > 1.0) || !mu_max.is_finite() {
        return Err(Error::Domain(format!("mu_max must exceed 1, got {mu_max}")));
    }
    let grid = mu_grid(mu_max);
    let values = grid.par_iter().map(|&mu| eval_at(&evaluator, mu)).collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let mut trace: Vec<(f64, f64)> = grid.iter().copied().zip(values.iter().copied()).collect();
    let (grid_mu, grid_value) = (grid[best], values[best]);

    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(grid.len() - 1)];
    if hi - lo <= MU_TOLERANCE {
        return Ok(OptimizationResult { argmax: grid_mu, value: grid_value, trace: sorted_trace(trace), feasible: true });
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval_at(&evaluator, x1)?;
    let mut f2 = eval_at(&evaluator, x2)?;
    trace.push((x1, f1));
    trace.push((x2, f2));
    while hi - lo > MU_TOLERANCE {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval_at(&evaluator, x1)?;
            trace.push((x1, f1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval_at(&evaluator, x2)?;
            trace.push((x2, f2));
        }
    }
    let mid = 0.5 * (lo + hi);
    let f_mid = eval_at(&evaluator, mid)?;
    trace.push((mid, f_mid));
    let (argmax, value) = if f_mid > grid_value { (mid, f_mid) } else { (grid_mu, grid_value) };
    Ok(OptimizationResult { argmax, value, trace: sorted_trace(trace), feasible: true })
}

/// [`optimal_mu`] with the analytical evaluator ([`ps_analytic`]) for `config`.
pub fn optimal_mu_analytic(config: &NetworkConfig, mu_max: f64) -> Result<OptimizationResult> {
    optimal_mu(mu_max, |mu| Ok(ps_analytic(&config.clone().with_mu(mu)?)?.ps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityStrategy {
    /// User-centric nulling with `μ` re-optimized at every probed `ρ`.
    Proposed,
    /// `μ = 1`.
    NonCoordination,
}

/// Search bounds for [`min_density_ratio_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySearch {
    pub rho_floor: f64,
    pub rho_cap: f64,
    pub mu_max: f64,
}

impl Default for DensitySearch {
    fn default() -> Self {
        Self { rho_floor: DEFAULT_RHO_FLOOR, rho_cap: DEFAULT_RHO_CAP, mu_max: DEFAULT_MU_MAX }
    }
}

fn ps_at_rho(config: &NetworkConfig, rho: f64, strategy: DensityStrategy, mu_max: f64) -> Result<f64> {
    let at_rho = config.clone().with_rho(rho)?;
    match strategy {
        DensityStrategy::NonCoordination => Ok(ps_analytic(&at_rho.with_mu(1.0)?)?.ps),
        DensityStrategy::Proposed => Ok(optimal_mu_analytic(&at_rho, mu_max)?.value),
    }
}

/// Smallest `ρ` in the default bounds whose analytical success probability reaches `target_ps`.
pub fn min_density_ratio(config: &NetworkConfig, target_ps: f64, strategy: DensityStrategy) -> Result<OptimizationResult> {
    min_density_ratio_with(config, target_ps, strategy, &DensitySearch::default())
}

/// Log-space bisection on `ρ`, relying on `p_s` being nondecreasing in `ρ`.
///
/// `argmax` is the upper end of the final bracket, which always meets the target.
/// When even `rho_cap` misses the target the result is marked infeasible and
/// carries the best success probability seen.
pub fn min_density_ratio_with(
    config: &NetworkConfig,
    target_ps: f64,
    strategy: DensityStrategy,
    search: &DensitySearch,
) -> Result<OptimizationResult> {
    if !(0.0..=1.0).contains(&target_ps) {
        return Err(Error::Domain(format!("target_ps must lie in [0, 1], got {target_ps}")));
    }
    let DensitySearch { rho_floor, rho_cap, mu_max } = *search;
    if !(rho_floor > 0.0 && rho_cap > rho_floor) {
        return Err(Error::Domain(format!("need 0 < rho_floor < rho_cap, got {rho_floor}, {rho_cap}")));
    }
    let f = |rho: f64| ps_at_rho(config, rho, strategy, mu_max);
    let mut trace = Vec::new();
    let p_lo = eval_at(&f, rho_floor)?;
    trace.push((rho_floor, p_lo));
    if p_lo >= target_ps {
        return Ok(OptimizationResult { argmax: rho_floor, value: p_lo, trace, feasible: true });
    }
    let p_hi = eval_at(&f, rho_cap)?;
    trace.push((rho_cap, p_hi));
    if p_hi < target_ps {
        return Ok(OptimizationResult { argmax: rho_cap, value: p_hi.max(p_lo), trace, feasible: false });
    }
    let (mut lo, mut hi, mut value) = (rho_floor, rho_cap, p_hi);
    while hi / lo > 1.0 + RHO_RELATIVE_PRECISION {
        let mid = (lo * hi).sqrt();
        let p = eval_at(&f, mid)?;
        trace.push((mid, p));
        if p >= target_ps {
            hi = mid;
            value = p;
        } else {
            lo = mid;
        }
    }
    Ok(OptimizationResult { argmax: hi, value, trace: sorted_trace(trace), feasible: true })
}

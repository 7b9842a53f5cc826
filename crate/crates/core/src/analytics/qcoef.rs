use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, DEFAULT_ABS_TOL};

/// Smallest retained-signal fraction accepted by the limited-feedback variants.
pub const MIN_KAPPA_0: f64 = 1e-12;

/// `(γ̂, δ, μ, ε)` used to produce a set of q-coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QParams {
    pub gamma_hat: f64,
    pub delta: f64,
    pub mu: f64,
    pub epsilon: f64,
}

impl QParams {
    fn validate(&self) -> Result<()> {
        if !(self.gamma_hat > 0.0) || !self.gamma_hat.is_finite() {
            return Err(Error::Domain(format!("gamma_hat must be > 0, got {}", self.gamma_hat)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.mu >= 1.0) || !self.mu.is_finite() {
            return Err(Error::Domain(format!("mu must be >= 1, got {}", self.mu)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Domain(format!("epsilon must lie in [0, 1], got {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CsiRegime {
    PerfectCsi,
    LimitedFeedback { kappa_0: f64, kappa_i: f64 },
}

/// `q_0, …, q_{l-1}` parameterizing the lower-triangular Toeplitz matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QCoefficients {
    values: Vec<f64>,
    regime: CsiRegime,
    params: QParams,
}

impl QCoefficients {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn regime(&self) -> CsiRegime {
        self.regime
    }
    pub fn params(&self) -> QParams {
        self.params
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Kernel of order `i`, written in `x = u^{1/δ}`:
/// `1/(1+x)` for `i = 0` and `x/(1+x)^{i+1}` otherwise.
fn kernel(i: usize, inv_delta: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    let ln_x = inv_delta * u.ln();
    let ln_1px = if ln_x > 36.0 { ln_x + (-ln_x).exp() } else { ln_x.exp().ln_1p() };
    if i == 0 {
        (-ln_1px).exp()
    } else {
        (ln_x - (i as f64 + 1.0) * ln_1px).exp()
    }
}

/// `∫_lo^hi kernel_i(u) du`, `hi = None` meaning `+∞`.
fn kernel_integral(i: usize, delta: f64, lo: f64, hi: Option<f64>, tol: f64) -> Result<f64> {
    let inv_delta = 1.0 / delta;
    let f = |u: f64| kernel(i, inv_delta, u);
    let r = match hi {
        Some(hi) => integrate(f, lo, hi, tol)?,
        None => {
            // kernel_i(u) ~ u^{-max(i,1)/δ} for large u
            let decay = (i.max(1) as f64) * inv_delta;
            integrate_to_infinity(f, lo, decay, tol)?
        }
    };
    Ok(r.value)
}

/// `s^δ [ ∫_{μ² s^{-δ}}^∞ k_i + weight · ∫_{s^{-δ}}^{μ² s^{-δ}} k_i ]`.
fn outer_and_annulus(i: usize, s: f64, delta: f64, mu: f64, annulus_weight: f64, tol: f64) -> Result<f64> {
    let scale = s.powf(delta);
    let lo = 1.0 / scale;
    let mid = mu * mu * lo;
    let tol_each = tol / (2.0 * scale);
    let outer = kernel_integral(i, delta, mid, None, tol_each)?;
    let inner = if annulus_weight > 0.0 && mid > lo {
        kernel_integral(i, delta, lo, Some(mid), tol_each)?
    } else {
        0.0
    };
    Ok(scale * (outer + annulus_weight * inner))
}

/// `s^δ ∫_{s^{-δ}}^{μ² s^{-δ}} k_i`, vanishing as `s → 0`.
fn annulus_only(i: usize, s: f64, delta: f64, mu: f64, tol: f64) -> Result<f64> {
    if s == 0.0 || mu == 1.0 {
        return Ok(0.0);
    }
    let scale = s.powf(delta);
    let lo = 1.0 / scale;
    let hi = mu * mu * lo;
    Ok(scale * kernel_integral(i, delta, lo, Some(hi), tol / scale)?)
}

/// Perfect-CSI coefficient `q_i`.
pub fn q_coefficient(i: usize, gamma_hat: f64, delta: f64, mu: f64, epsilon: f64) -> Result<f64> {
    let p = QParams { gamma_hat, delta, mu, epsilon };
    p.validate()?;
    let q = outer_and_annulus(i, gamma_hat, delta, mu, epsilon, DEFAULT_ABS_TOL)?;
    Ok(q.max(0.0))
}

fn check_kappa(kappa_0: f64, kappa_i: f64) -> Result<()> {
    if !(kappa_0 >= MIN_KAPPA_0 && kappa_0 <= 1.0) {
        return Err(Error::Domain(format!(
            "kappa_0 must lie in [{MIN_KAPPA_0:e}, 1], got {kappa_0}"
        )));
    }
    if !(0.0..1.0).contains(&kappa_i) || (kappa_0 + kappa_i - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "kappa_i must equal 1 - kappa_0, got kappa_0={kappa_0}, kappa_i={kappa_i}"
        )));
    }
    Ok(())
}

/// Limited-feedback coefficient `q_{i,LF}`: the signal threshold is scaled by
/// `1/κ_0` and BSs that granted the request leave residual interference scaled by `κ_I/κ_0`.
pub fn q_coefficient_lf(
    i: usize,
    gamma_hat: f64,
    delta: f64,
    mu: f64,
    epsilon: f64,
    kappa_0: f64,
    kappa_i: f64,
) -> Result<f64> {
    let p = QParams { gamma_hat, delta, mu, epsilon };
    p.validate()?;
    check_kappa(kappa_0, kappa_i)?;
    let tol = DEFAULT_ABS_TOL / 2.0;
    let main = outer_and_annulus(i, gamma_hat / kappa_0, delta, mu, epsilon, tol)?;
    let residual = if epsilon < 1.0 {
        (1.0 - epsilon) * annulus_only(i, kappa_i / kappa_0 * gamma_hat, delta, mu, tol)?
    } else {
        0.0
    };
    Ok((main + residual).max(0.0))
}

/// The first `l` coefficients for the given regime.
pub fn q_coefficients(l: usize, params: QParams, regime: CsiRegime) -> Result<QCoefficients> {
    params.validate()?;
    let QParams { gamma_hat, delta, mu, epsilon } = params;
    let values = (0..l)
        .map(|i| match regime {
            CsiRegime::PerfectCsi => q_coefficient(i, gamma_hat, delta, mu, epsilon),
            CsiRegime::LimitedFeedback { kappa_0, kappa_i } => {
                q_coefficient_lf(i, gamma_hat, delta, mu, epsilon, kappa_0, kappa_i)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QCoefficients { values, regime, params })
}

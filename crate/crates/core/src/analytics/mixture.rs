use serde::Serialize;

use super::{
    activity_probability, epsilon_overload, mean_requests, ps_given_k, q_coefficients,
    quantization_distortion, requests_received_pmf, CsiRegime, QCoefficients, QParams,
};
use crate::error::{Error, Result};
use crate::params::NetworkConfig;
use crate::special::gamma_p;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureTerm {
    pub k: usize,
    pub p_k: f64,
    pub ps_k: f64,
}

/// Approximate success probability together with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureResult {
    pub ps: f64,
    /// `(k, p_K(k), p_s(k))` for `k = 0 … M-1`.
    pub per_k_terms: Vec<MixtureTerm>,
    /// Poisson mass of `k >= M`.
    pub tail_mass: f64,
    /// Contribution of `k >= M`: all of them leave one degree of freedom.
    pub tail_term: f64,
    pub epsilon: f64,
    pub k_bar: f64,
    pub p_a: f64,
    pub q: QCoefficients,
}

fn mixture(config: &NetworkConfig, regime_of: impl Fn() -> Result<CsiRegime>) -> Result<MixtureResult> {
    let m = config.m_antennas();
    let p_a = activity_probability(config.rho())?;
    let k_bar = mean_requests(p_a, config.mu())?;
    let epsilon = epsilon_overload(m, k_bar)?;
    let params = QParams {
        gamma_hat: config.sinr_threshold(),
        delta: config.delta(),
        mu: config.mu(),
        epsilon,
    };
    let q = q_coefficients(m, params, regime_of()?)?;
    let per_k_terms = (0..m)
        .map(|k| {
            Ok(MixtureTerm {
                k,
                p_k: requests_received_pmf(k_bar, k as u64),
                ps_k: ps_given_k(m - k, p_a, q.values())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail_mass = if k_bar == 0.0 { 0.0 } else { gamma_p(m as f64, k_bar)? };
    let tail_term = tail_mass / (1.0 + p_a * q.values()[0]);
    let body: f64 = per_k_terms.iter().map(|t| t.p_k * t.ps_k).sum();
    let ps = body + tail_term;
    let mass: f64 = per_k_terms.iter().map(|t| t.p_k).sum::<f64>() + tail_mass;
    if (mass - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!("request pmf sums to {mass}")));
    }
    if !(-1e-12..=1.0 + 1e-9).contains(&ps) {
        return Err(Error::Numerical(format!("mixture probability {ps} outside [0, 1]")));
    }
    Ok(MixtureResult {
        ps: ps.clamp(0.0, 1.0),
        per_k_terms,
        tail_mass,
        tail_term,
        epsilon,
        k_bar,
        p_a,
        q,
    })
}

/// Poisson-mixture approximation of the success probability with perfect CSI.
pub fn ps_mixture(config: &NetworkConfig) -> Result<MixtureResult> {
    if config.feedback_bits().is_some() {
        return Err(Error::Domain("ps_mixture expects a perfect-CSI config (no feedback_bits)".into()));
    }
    mixture(config, || Ok(CsiRegime::PerfectCsi))
}

/// Limited-feedback counterpart of [`ps_mixture`].
pub fn ps_mixture_lf(config: &NetworkConfig) -> Result<MixtureResult> {
    let bits = config
        .feedback_bits()
        .ok_or_else(|| Error::Domain("ps_mixture_lf needs feedback_bits".into()))?;
    mixture(config, || {
        let (kappa_0, kappa_i) = quantization_distortion(config.m_antennas(), bits)?;
        Ok(CsiRegime::LimitedFeedback { kappa_0, kappa_i })
    })
}

/// Dispatches on the presence of `feedback_bits`.
pub fn ps_analytic(config: &NetworkConfig) -> Result<MixtureResult> {
    match config.feedback_bits() {
        None => ps_mixture(config),
        Some(_) => ps_mixture_lf(config),
    }
}

//! Closed-form engine: activity probability, request statistics, the
//! q-coefficients, the Toeplitz conditional success probability and the
//! Poisson mixture over the home BS's request count.
//!
//! Every function here is pure.

mod feedback;
mod mixture;
mod oracle;
mod qcoef;
mod requests;
mod toeplitz;

pub use feedback::quantization_distortion;
pub use mixture::{ps_analytic, ps_mixture, ps_mixture_lf, MixtureResult, MixtureTerm};
pub use oracle::ps_given_k_oracle;
pub use qcoef::{
    q_coefficient, q_coefficient_lf, q_coefficients, CsiRegime, QCoefficients, QParams,
};
pub use requests::{
    activity_probability, epsilon_overload, mean_requests, requests_received_pmf,
    requests_sent_pmf, ACTIVITY_FIT_C0,
};
pub use toeplitz::ps_given_k;

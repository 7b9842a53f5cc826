use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate_to_infinity;

const ORACLE_TOL: f64 = 1e-12;

/// Conditional success probability by the Laplace-derivative route: the terms
/// `a_n(r)` of the Gamma-CDF expansion are built by their recursion and the
/// truncated sum is averaged over the Rayleigh home-BS distance by quadrature.
///
/// This shares nothing with [`super::ps_given_k`] beyond the coefficients; the
/// result does not depend on `lambda_b`.
pub fn ps_given_k_oracle(l: usize, p_a: f64, q: &[f64], lambda_b: f64) -> Result<f64> {
    if l == 0 || q.len() < l {
        return Err(Error::Domain(format!("need l >= 1 and at least l coefficients (l={l}, {} given)", q.len())));
    }
    if !(lambda_b > 0.0) || !lambda_b.is_finite() {
        return Err(Error::Domain(format!("lambda_b must be > 0, got {lambda_b}")));
    }
    let integrand = |r: f64| {
        let t = PI * lambda_b * p_a * r * r;
        let mut a = Vec::with_capacity(l);
        a.push((-t * q[0]).exp());
        for n in 1..l {
            let nf = n as f64;
            let s: f64 = (0..n).map(|i| (nf - i as f64) / nf * q[n - i] * a[i]).sum();
            a.push(t * s);
        }
        let density = 2.0 * PI * lambda_b * r * (-PI * lambda_b * r * r).exp();
        density * a.iter().sum::<f64>()
    };
    let r = integrate_to_infinity(integrand, 0.0, 3.0, ORACLE_TOL)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{ps_given_k, q_coefficients, CsiRegime, QParams};

    #[test]
    fn scalar_case_is_rayleigh_exponential_integral() {
        for &(p_a, q0) in &[(0.9911, 4.0), (0.3, 0.785), (1.0, 12.0)] {
            let v = ps_given_k_oracle(1, p_a, &[q0], 1e-3).unwrap();
            assert!((v - 1.0 / (1.0 + p_a * q0)).abs() < 1e-10);
        }
    }

    #[test]
    fn independent_of_density() {
        let q = [2.0, 0.7, 0.3, 0.12, 0.05];
        let a = ps_given_k_oracle(5, 0.8, &q, 1e-3).unwrap();
        let b = ps_given_k_oracle(5, 0.8, &q, 1.0).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_toeplitz_route() {
        let params = QParams { gamma_hat: 1.0, delta: 0.5, mu: 1.5, epsilon: 0.1 };
        let q = q_coefficients(3, params, CsiRegime::PerfectCsi).unwrap();
        let fast = ps_given_k(3, 0.5, q.values()).unwrap();
        let slow = ps_given_k_oracle(3, 0.5, q.values(), 1e-3).unwrap();
        assert!((fast - slow).abs() < 1e-6, "{fast} vs {slow}");
    }
}

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Cell-size fitting constant of the activity probability.
pub const ACTIVITY_FIT_C0: f64 = 3.5;

/// Stop summing a Poisson series once the remaining mass is below this.
const TAIL_MASS: f64 = 1e-12;

/// Probability that a BS has at least one user in its cell, as a function of
/// the BS-user density ratio `rho`.
pub fn activity_probability(rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be positive and finite, got {rho}")));
    }
    let c0 = ACTIVITY_FIT_C0;
    Ok(1.0 - (1.0 + 1.0 / (c0 * rho)).powf(-c0))
}

/// Mean number of nulling requests received by an active BS, `p_a (mu^2 - 1)`.
pub fn mean_requests(p_a: f64, mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_a) {
        return Err(Error::Domain(format!("p_a must lie in [0, 1], got {p_a}")));
    }
    if !(mu >= 1.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be >= 1, got {mu}")));
    }
    Ok(p_a * (mu * mu - 1.0))
}

/// Poisson approximation to the pmf of requests received by a BS.
pub fn requests_received_pmf(k_bar: f64, k: u64) -> f64 {
    if k_bar == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    (kf * k_bar.ln() - k_bar - ln_gamma(kf + 1.0)).exp()
}

/// Geometric pmf of requests sent by the typical user (Rayleigh-mixed Poisson).
pub fn requests_sent_pmf(k_bar: f64, n: u64) -> f64 {
    if k_bar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ratio = k_bar / (1.0 + k_bar);
    ratio.powf(n as f64) / (1.0 + k_bar)
}

/// Probability that a BS drops a given request because it already holds `M - 1` grants.
pub fn epsilon_overload(m_antennas: usize, k_bar: f64) -> Result<f64> {
    if m_antennas == 0 {
        return Err(Error::Domain("m_antennas must be >= 1".into()));
    }
    if !(k_bar >= 0.0) || !k_bar.is_finite() {
        return Err(Error::Domain(format!("k_bar must be >= 0, got {k_bar}")));
    }
    if m_antennas == 1 {
        // Every summand weight is one and the pmf sums to one.
        return Ok(1.0);
    }
    if k_bar == 0.0 {
        return Ok(0.0);
    }
    let cap = (m_antennas - 1) as u64;
    let mut sum = 0.0;
    let mut k = cap;
    loop {
        let pk = requests_received_pmf(k_bar, k);
        let weight = (k + 1 - cap) as f64 / (k + 1) as f64;
        sum += weight * pk;
        let kf = k as f64;
        if kf + 2.0 > k_bar {
            // Tail past k is bounded by a geometric series with ratio k_bar / (k + 2).
            let next = requests_received_pmf(k_bar, k + 1);
            let bound = next / (1.0 - k_bar / (kf + 2.0));
            if bound < TAIL_MASS {
                break;
            }
        }
        k += 1;
    }
    Ok(sum.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activity_probability_values() {
                let pa = activity_probability(0.1).unwrap();
        assert!((pa - 0.991_127_010_542_827).abs() < 1e-14, "{pa}");
        let pa1 = activity_probability(1.0).unwrap();
        assert!((pa1 - 0.585_051_349_019_134).abs() < 1e-14, "{pa1}");
        assert!(activity_probability(1e-9).unwrap() > 1.0 - 1e-12);
        assert!(activity_probability(0.0).is_err());
        assert!(activity_probability(-1.0).is_err());
    }

    #[test]
    fn mean_requests_values() {
        assert_eq!(mean_requests(0.7, 1.0).unwrap(), 0.0);
        assert_eq!(mean_requests(1.0, 2.0).unwrap(), 3.0);
        assert!((mean_requests(0.9911, 2.0).unwrap() - 2.9733).abs() < 1e-12);
        assert!(mean_requests(1.2, 2.0).is_err());
        assert!(mean_requests(0.5, 0.9).is_err());
    }

    #[test]
    fn received_pmf_values() {
        assert_eq!(requests_received_pmf(0.0, 0), 1.0);
        assert_eq!(requests_received_pmf(0.0, 3), 0.0);
        let expected = 4.5 * (-3.0f64).exp();
        assert!((requests_received_pmf(3.0, 2) - expected).abs() < 1e-14);
        assert!((expected - 0.2240).abs() < 1e-4);
        let total: f64 = (0..100).map(|k| requests_received_pmf(7.3, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sent_pmf_values_and_mean() {
        assert_eq!(requests_sent_pmf(0.0, 0), 1.0);
        assert_eq!(requests_sent_pmf(0.0, 1), 0.0);
        let kb = 0.9911 * 3.0;
        assert!((requests_sent_pmf(kb, 0) - 1.0 / (1.0 + kb)).abs() < 1e-15);
        assert!((requests_sent_pmf(kb, 0) - 0.2517).abs() < 1e-4);
        // Series oracle for the mean.
        let (mut mass, mut mean) = (0.0, 0.0);
        for n in 0..1_000_000u64 {
            let p = requests_sent_pmf(kb, n);
            mass += p;
            mean += n as f64 * p;
            if p < 1e-300 {
                break;
            }
        }
        assert!((mass - 1.0).abs() < 1e-9);
        assert!((mean - kb).abs() < 1e-6, "{mean}");
    }

    /// Brute-force series with a fixed, generous number of terms.
    fn epsilon_brute(m: usize, kb: f64) -> f64 {
        (m as u64 - 1..400)
            .map(|k| {
                let w = (k + 2 - m as u64) as f64 / (k + 1) as f64;
                w * requests_received_pmf(kb, k)
            })
            .sum()
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_overload(1, 2.0).unwrap(), 1.0);
        assert_eq!(epsilon_overload(1, 0.0).unwrap(), 1.0);
        assert_eq!(epsilon_overload(4, 0.0).unwrap(), 0.0);
        let e = epsilon_overload(8, 3.0).unwrap();
        assert!((e - epsilon_brute(8, 3.0)).abs() < 1e-12);
        assert!((e - 0.0057).abs() < 5e-5, "{e}");
        for &(m, kb) in &[(2, 0.5), (4, 2.9), (8, 12.0), (6, 40.0)] {
            let e = epsilon_overload(m, kb).unwrap();
            assert!((e - epsilon_brute(m, kb)).abs() < 1e-12, "m={m} kb={kb}");
        }
        assert!(epsilon_overload(0, 1.0).is_err());
    }
}

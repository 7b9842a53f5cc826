use crate::error::{Error, Result};

/// Tolerance below zero accepted for a partial success probability.
const NEGATIVE_SLACK: f64 = 1e-12;

/// Conditional success probability `‖(I_l + p_a Q_l)^{-1}‖₁`.
///
/// The inverse of a lower-triangular Toeplitz matrix is itself lower-triangular
/// Toeplitz, so only its first column `x` is formed, by forward substitution.
/// All entries of `x` are nonnegative, which puts the maximum absolute column
/// sum on the first column: the result is `Σ x_n`.
pub fn ps_given_k(l: usize, p_a: f64, q: &[f64]) -> Result<f64> {
    if l == 0 {
        return Err(Error::Domain("l must be >= 1".into()));
    }
    if q.len() < l {
        return Err(Error::Domain(format!("need {l} q-coefficients, got {}", q.len())));
    }
    if !(0.0..=1.0).contains(&p_a) {
        return Err(Error::Domain(format!("p_a must lie in [0, 1], got {p_a}")));
    }
    let x = first_column(l, p_a, q);
    if let Some((n, v)) = x.iter().enumerate().find(|(_, &v)| v < -NEGATIVE_SLACK) {
        return Err(Error::Numerical(format!("partial success probability x[{n}] = {v} < 0")));
    }
    let total: f64 = x.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(Error::Numerical(format!("success probability {total} exceeds 1")));
    }
    Ok(total.clamp(0.0, 1.0))
}

fn first_column(l: usize, p_a: f64, q: &[f64]) -> Vec<f64> {
    let diag = 1.0 + p_a * q[0];
    assert!(diag > 0.0, "diagonal 1 + p_a q_0 must be positive");
    let mut x = Vec::with_capacity(l);
    x.push(1.0 / diag);
    for n in 1..l {
        let acc: f64 = (1..=n).map(|i| q[i] * x[n - i]).sum();
        x.push(p_a * acc / diag);
    }
    x
}

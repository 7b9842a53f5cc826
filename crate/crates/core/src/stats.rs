//! Goodness-of-fit helpers shared by the Monte Carlo checks and the `pmf-check` command.

use crate::error::{Error, Result};
use crate::special::gamma_p;

/// Kolmogorov-Smirnov statistic `sup |F_n(x) - F(x)|` of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d.max(lo).max(hi)
    })
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn ks_coefficient(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("significance level must lie in (0, 1), got {level}")));
    }
    // Asymptotic Kolmogorov quantile sqrt(-ln(level / 2) / 2).
    Ok((-(0.5 * level).ln() / 2.0).sqrt())
}

/// Asymptotic one-sample KS critical value at significance `level`.
pub fn ks_critical(n: usize, level: f64) -> Result<f64> {
    Ok(ks_coefficient(level)? / (n as f64).sqrt())
}

/// Asymptotic two-sample KS critical value at significance `level`.
pub fn ks_critical_two_sample(n: usize, m: usize, level: f64) -> Result<f64> {
    let (n, m) = (n as f64, m as f64);
    Ok(ks_coefficient(level)? * ((n + m) / (n * m)).sqrt())
}

/// Outcome of a chi-square goodness-of-fit test after merging sparse bins.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
}

impl ChiSquare {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Chi-square test of integer `counts` against bin probabilities `probs`.
///
/// The last bin absorbs `1 - Σ probs`. Adjacent bins are merged left to right
/// until each expected count is at least 5.
pub fn chi_square(counts: &[u64], probs: &[f64], level: f64) -> Result<ChiSquare> {
    if counts.len() != probs.len() || counts.is_empty() {
        return Err(Error::Domain("counts and probabilities must be nonempty and equal length".into()));
    }
    let n: u64 = counts.iter().sum();
    let n = n as f64;
    let mut p = probs.to_vec();
    let head: f64 = p[..p.len() - 1].iter().sum();
    *p.last_mut().expect("nonempty") = (1.0 - head).max(0.0);

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&c, &pi) in counts.iter().zip(&p) {
        obs += c as f64;
        exp += pi * n;
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => bins.push((obs, exp)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::Domain("too few populated bins for a chi-square test".into()));
    }
    let statistic = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    Ok(ChiSquare { statistic, dof, critical: chi_square_quantile(dof, 1.0 - level)? })
}

/// Quantile of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_quantile(dof: usize, prob: f64) -> Result<f64> {
    if dof == 0 || !(prob > 0.0 && prob < 1.0) {
        return Err(Error::Domain(format!("chi-square quantile needs dof >= 1 and p in (0, 1), got {dof}, {prob}")));
    }
    let k = dof as f64 / 2.0;
    let cdf = |x: f64| gamma_p(k, x / 2.0);
    let (mut lo, mut hi) = (0.0, dof as f64 + 10.0);
    while cdf(hi)? < prob {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid)? < prob {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Total-variation distance `½ Σ |p - q|`; missing entries count as zero.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Sample mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var)
}

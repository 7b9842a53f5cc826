//! Rayleigh channels, zero-forcing precoding and random vector quantization.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CVec = Vec<Complex64>;

/// Largest number of codewords drawn explicitly in codebook mode.
pub const MAX_CODEBOOK_BITS: u32 = 12;

/// Relative norm below which a projected vector counts as zero.
const RANK_TOL: f64 = 1e-12;

/// `a^H b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(a: &mut [Complex64], s: f64) {
    for x in a {
        *x *= s;
    }
}

/// Vector with i.i.d. `CN(0, 1)` entries.
pub fn complex_gaussian<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..m)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(s * re, s * im)
        })
        .collect()
}

/// Unit vector uniform on the complex sphere in `C^m`.
pub fn random_unit<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CVec {
    loop {
        let mut v = complex_gaussian(m, rng);
        let n = norm(&v);
        if n > 0.0 {
            scale(&mut v, 1.0 / n);
            return v;
        }
    }
}

/// Removes from `v` its components along the orthonormal `basis`, twice for stability.
fn project_out(v: &mut [Complex64], basis: &[CVec]) {
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, v);
            for (x, qi) in v.iter_mut().zip(q) {
                *x -= c * qi;
            }
        }
    }
}

/// Orthonormal basis of `span(vectors)` by modified Gram-Schmidt; numerically
/// dependent vectors are dropped.
pub fn orthonormal_basis(vectors: &[CVec]) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n0 = norm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut u = v.clone();
        project_out(&mut u, &basis);
        let n = norm(&u);
        if n > RANK_TOL * n0 {
            scale(&mut u, 1.0 / n);
            basis.push(u);
        }
    }
    basis
}

/// Zero-forcing precoder: `h` projected onto the orthogonal complement of the
/// nulled channels, normalized. With nothing to null this is `h / ‖h‖`.
pub fn zf_precoder(h: &[Complex64], nulled: &[CVec]) -> Result<CVec> {
    let m = h.len();
    if m == 0 {
        return Err(Error::Domain("empty channel vector".into()));
    }
    if nulled.len() > m - 1 {
        return Err(Error::Domain(format!("cannot null {} directions with {m} antennas", nulled.len())));
    }
    if nulled.iter().any(|v| v.len() != m) {
        return Err(Error::Domain("nulled channel dimension mismatch".into()));
    }
    let hn = norm(h);
    if hn == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let basis = orthonormal_basis(nulled);
    let mut w = h.to_vec();
    project_out(&mut w, &basis);
    let n = norm(&w);
    if !(n > RANK_TOL * hn) {
        return Err(Error::DegenerateChannel);
    }
    scale(&mut w, 1.0 / n);
    Ok(w)
}

/// Draws `sin²θ` between a direction and its RVQ codeword from the exact law
/// `P(sin²θ > x) = (1 - x^{M-1})^{2^B}`.
pub fn rvq_sin2<R: Rng + ?Sized>(m: usize, bits: u32, rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let codewords_inv = (-(bits as f64) * std::f64::consts::LN_2).exp();
    (-(codewords_inv * u.ln()).exp_m1()).powf(1.0 / (m as f64 - 1.0))
}

/// RVQ of a unit direction by the exact angle law: `cosθ·h + sinθ·e` with `e`
/// uniform on the unit sphere orthogonal to `h`.
pub fn rvq_quantize<R: Rng + ?Sized>(h_dir: &[Complex64], bits: u32, rng: &mut R) -> Result<CVec> {
    let m = h_dir.len();
    if m < 2 {
        return Err(Error::Domain("RVQ needs at least 2 antennas".into()));
    }
    let s2 = rvq_sin2(m, bits, rng);
    let (sin, cos) = (s2.sqrt(), (1.0 - s2).max(0.0).sqrt());
    let basis = [h_dir.to_vec()];
    let e = loop {
        let mut e = complex_gaussian(m, rng);
        project_out(&mut e, &basis);
        let n = norm(&e);
        if n > RANK_TOL {
            scale(&mut e, 1.0 / n);
            break e;
        }
    };
    Ok(h_dir.iter().zip(&e).map(|(h, e)| h * cos + e * sin).collect())
}

/// RVQ against an explicit codebook of `2^B` isotropic unit vectors, keeping
/// the codeword with the largest `|h^H c|²`.
pub fn rvq_quantize_codebook<R: Rng + ?Sized>(h_dir: &[Complex64], bits: u32, rng: &mut R) -> Result<CVec> {
    let m = h_dir.len();
    if m < 2 {
        return Err(Error::Domain("RVQ needs at least 2 antennas".into()));
    }
    if bits > MAX_CODEBOOK_BITS {
        return Err(Error::Domain(format!("explicit codebooks are limited to {MAX_CODEBOOK_BITS} bits, got {bits}")));
    }
    let mut best = random_unit(m, rng);
    let mut best_gain = inner(h_dir, &best).norm_sqr();
    for _ in 1..(1usize << bits) {
        let c = random_unit(m, rng);
        let g = inner(h_dir, &c).norm_sqr();
        if g > best_gain {
            best = c;
            best_gain = g;
        }
    }
    Ok(best)
}

/// `sin²` of the angle between two unit vectors.
pub fn sin2_between(a: &[Complex64], b: &[Complex64]) -> f64 {
    (1.0 - inner(a, b).norm_sqr()).max(0.0)
}

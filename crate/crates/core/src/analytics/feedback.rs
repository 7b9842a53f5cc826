use crate::error::{Error, Result};
use crate::special::{ln_gamma, ln_gamma_ratio};

/// Codebook sizes up to this many bits use the exact finite product.
const PRODUCT_MAX_BITS: u32 = 12;

/// Mean retained signal fraction `kappa_0` and mean RVQ distortion `kappa_I`
/// for an `M`-antenna channel quantized with `B` bits.
///
/// `kappa_I = 2^B · Beta(2^B, M/(M-1))` and `kappa_0 = 1 - kappa_I`.
pub fn quantization_distortion(m_antennas: usize, feedback_bits: u32) -> Result<(f64, f64)> {
    if m_antennas < 2 {
        return Err(Error::Domain(format!(
            "quantization distortion needs m_antennas >= 2, got {m_antennas}"
        )));
    }
    if feedback_bits > 64 {
        return Err(Error::Domain(format!("feedback_bits must be <= 64, got {feedback_bits}")));
    }
    let m = m_antennas as f64;
    let y = m / (m - 1.0);
    let kappa_i = if feedback_bits == 0 {
        (m - 1.0) / m
    } else if feedback_bits <= PRODUCT_MAX_BITS {
        // N·Beta(N, y) = prod_{j=1..N} j / (y + j - 1)
        let n = 1u64 << feedback_bits;
        (1..=n).fold(1.0, |acc, j| acc * (j as f64 / (y + j as f64 - 1.0)))
    } else {
        // N·Beta(N, y) = Γ(y) Γ(N + 1) / Γ(N + y)
        let n = 2f64.powi(feedback_bits as i32);
        (ln_gamma(y) + ln_gamma_ratio(n, 1.0, y)).exp()
    };
    Ok((1.0 - kappa_i, kappa_i))
}

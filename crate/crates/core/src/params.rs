//! Scenario configuration shared by every engine.
//!
//! The on-disk format is a flat `key = value` file (a TOML subset). Keys:
//!
//! | key              | meaning                                   | default            |
//! |------------------|-------------------------------------------|--------------------|
//! | `lambda_b`       | BS density per unit area, > 0             | required           |
//! | `lambda_u`       | user density per unit area, > 0           | required           |
//! | `m_antennas`     | antennas per BS, >= 1                     | required           |
//! | `alpha`          | path-loss exponent, > 2                   | required           |
//! | `sinr_threshold` | SIR threshold, linear scale, > 0          | required           |
//! | `mu`             | IN range coefficient, >= 1                | `1.0`              |
//! | `feedback_bits`  | RVQ bits per channel; absent = perfect CSI| absent             |
//! | `window_side`    | side of the square simulation window      | `sqrt(500/lambda_b)` |
//! | `n_realizations` | Monte Carlo sample count, >= 1            | `10000`            |
//! | `seed`           | master RNG seed (u64)                     | `0`                |

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expected number of BSs in the default simulation window.
pub const DEFAULT_EXPECTED_BS: f64 = 500.0;
/// Below this expected BS count the window is considered too small.
pub const MIN_EXPECTED_BS: f64 = 100.0;
pub const DEFAULT_REALIZATIONS: u64 = 10_000;

/// Validated, immutable network scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig {
    lambda_b: f64,
    lambda_u: f64,
    m_antennas: usize,
    alpha: f64,
    sinr_threshold: f64,
    mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    feedback_bits: Option<u32>,
    window_side: f64,
    n_realizations: u64,
    #[serde(serialize_with = "seed_serde::serialize")]
    seed: u64,
}

/// TOML integers are signed 64-bit, so seeds above `i64::MAX` are written as strings.
mod seed_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&seed.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Int(v)) => Ok(Some(v)),
            Some(Repr::Str(s)) => s.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lambda_b: f64,
    lambda_u: f64,
    m_antennas: i64,
    alpha: f64,
    sinr_threshold: f64,
    mu: Option<f64>,
    feedback_bits: Option<i64>,
    window_side: Option<f64>,
    n_realizations: Option<i64>,
    #[serde(default, deserialize_with = "seed_serde::deserialize")]
    seed: Option<u64>,
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidConfig(what.to_string()))
    }
}

impl NetworkConfig {
    /// Perfect-CSI scenario with `mu = 1`, the default window, realization count and seed.
    pub fn new(
        lambda_b: f64,
        lambda_u: f64,
        m_antennas: usize,
        alpha: f64,
        sinr_threshold: f64,
    ) -> Result<Self> {
        let window_side = if lambda_b > 0.0 {
            (DEFAULT_EXPECTED_BS / lambda_b).sqrt()
        } else {
            f64::NAN
        };
        let cfg = Self {
            lambda_b,
            lambda_u,
            m_antennas,
            alpha,
            sinr_threshold,
            mu: 1.0,
            feedback_bits: None,
            window_side,
            n_realizations: DEFAULT_REALIZATIONS,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        check(self.lambda_b > 0.0 && self.lambda_b.is_finite(), "lambda_b > 0")?;
        check(self.lambda_u > 0.0 && self.lambda_u.is_finite(), "lambda_u > 0")?;
        check(self.m_antennas >= 1, "m_antennas >= 1")?;
        check(self.alpha > 2.0 && self.alpha.is_finite(), "alpha > 2")?;
        check(
            self.sinr_threshold > 0.0 && self.sinr_threshold.is_finite(),
            "sinr_threshold > 0",
        )?;
        check(self.mu >= 1.0 && self.mu.is_finite(), "mu >= 1")?;
        check(
            self.window_side > 0.0 && self.window_side.is_finite(),
            "window_side > 0",
        )?;
        check(self.n_realizations >= 1, "n_realizations >= 1")?;
        if let Some(b) = self.feedback_bits {
            check(b <= 64, "feedback_bits <= 64")?;
        }
        Ok(())
    }

    /// Parses the flat key-value format and validates the result.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
        check(raw.m_antennas >= 1, "m_antennas >= 1")?;
        let mut cfg = Self::new(
            raw.lambda_b,
            raw.lambda_u,
            raw.m_antennas as usize,
            raw.alpha,
            raw.sinr_threshold,
        )?;
        if let Some(mu) = raw.mu {
            cfg = cfg.with_mu(mu)?;
        }
        if let Some(b) = raw.feedback_bits {
            check((0..=64).contains(&b), "0 <= feedback_bits <= 64")?;
            cfg = cfg.with_feedback_bits(Some(b as u32))?;
        }
        if let Some(side) = raw.window_side {
            cfg = cfg.with_window_side(side)?;
        }
        if let Some(n) = raw.n_realizations {
            check(n >= 1, "n_realizations >= 1")?;
            cfg = cfg.with_n_realizations(n as u64)?;
        }
        if let Some(seed) = raw.seed {
            cfg = cfg.with_seed(seed);
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Human-readable warnings about valid but questionable settings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let expected = self.expected_bs_count();
        if expected < MIN_EXPECTED_BS {
            out.push(format!(
                "window holds only {expected:.1} BSs on average (recommended >= {MIN_EXPECTED_BS})"
            ));
        }
        out
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }
    pub fn lambda_u(&self) -> f64 {
        self.lambda_u
    }
    pub fn m_antennas(&self) -> usize {
        self.m_antennas
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn sinr_threshold(&self) -> f64 {
        self.sinr_threshold
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn feedback_bits(&self) -> Option<u32> {
        self.feedback_bits
    }
    pub fn window_side(&self) -> f64 {
        self.window_side
    }
    pub fn n_realizations(&self) -> u64 {
        self.n_realizations
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// BS-user density ratio.
    pub fn rho(&self) -> f64 {
        self.lambda_b / self.lambda_u
    }

    /// `2 / alpha`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    pub fn expected_bs_count(&self) -> f64 {
        self.lambda_b * self.window_side * self.window_side
    }

    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        self.mu = mu;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sinr_threshold(mut self, gamma: f64) -> Result<Self> {
        self.sinr_threshold = gamma;
        self.validate()?;
        Ok(self)
    }

    pub fn with_m_antennas(mut self, m: usize) -> Result<Self> {
        self.m_antennas = m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn with_feedback_bits(mut self, bits: Option<u32>) -> Result<Self> {
        self.feedback_bits = bits;
        self.validate()?;
        Ok(self)
    }

    /// Replaces both densities; the window keeps its side length.
    pub fn with_densities(mut self, lambda_b: f64, lambda_u: f64) -> Result<Self> {
        self.lambda_b = lambda_b;
        self.lambda_u = lambda_u;
        self.validate()?;
        Ok(self)
    }

    /// Sets `lambda_u = lambda_b / rho`, keeping `lambda_b` and the window.
    pub fn with_rho(self, rho: f64) -> Result<Self> {
        check(rho > 0.0 && rho.is_finite(), "rho > 0")?;
        let lambda_b = self.lambda_b;
        self.with_densities(lambda_b, lambda_b / rho)
    }

    pub fn with_window_side(mut self, side: f64) -> Result<Self> {
        self.window_side = side;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n_realizations(mut self, n: u64) -> Result<Self> {
        self.n_realizations = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<NetworkConfig> {
    let text = std::fs::read_to_string(path)?;
    NetworkConfig::from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = "lambda_b = 1e-3\nlambda_u = 1e-2\nm_antennas = 8\nalpha = 4.0\nsinr_threshold = 10.0\nmu = 2.0\n";

    fn err_text(text: &str) -> String {
        match NetworkConfig::from_toml_str(text) {
            Err(Error::InvalidConfig(msg)) => msg,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn baseline_config_derived_quantities() {
        let cfg = NetworkConfig::from_toml_str(BASELINE).unwrap();
        assert!((cfg.rho() - 0.1).abs() < 1e-15);
        assert_eq!(cfg.delta(), 0.5);
        assert_eq!(cfg.mu(), 2.0);
        assert_eq!(cfg.feedback_bits(), None);
        assert!((cfg.expected_bs_count() - DEFAULT_EXPECTED_BS).abs() < 1e-9);
    }

    #[test]
    fn alpha_must_exceed_two() {
        let text = BASELINE.replace("alpha = 4.0", "alpha = 1.5");
        assert!(err_text(&text).contains("alpha > 2"));
    }

    #[test]
    fn mu_must_be_at_least_one() {
        let text = BASELINE.replace("mu = 2.0", "mu = 0.5");
        assert!(err_text(&text).contains("mu >= 1"));
    }

    #[test]
    fn rejects_non_positive_densities_and_zero_antennas() {
        assert!(err_text(&BASELINE.replace("lambda_u = 1e-2", "lambda_u = 0.0")).contains("lambda_u"));
        assert!(err_text(&BASELINE.replace("m_antennas = 8", "m_antennas = 0")).contains("m_antennas"));
    }

    #[test]
    fn malformed_file_is_a_parse_error() {
        let res = NetworkConfig::from_toml_str("lambda_b = = 3");
        assert!(matches!(res, Err(Error::Parse(_))));
        let res = NetworkConfig::from_toml_str("lambda_b = 1.0");
        assert!(matches!(res, Err(Error::Parse(_))));
        let res = NetworkConfig::from_toml_str(&format!("{BASELINE}bogus = 1\n"));
        assert!(matches!(res, Err(Error::Parse(_))));
    }

    #[test]
    fn small_window_warns() {
        let cfg = NetworkConfig::new(1e-3, 1e-2, 4, 4.0, 10.0)
            .unwrap()
            .with_window_side(100.0)
            .unwrap();
        assert_eq!(cfg.warnings().len(), 1);
        let cfg = NetworkConfig::new(1e-3, 1e-2, 4, 4.0, 10.0).unwrap();
        assert!(cfg.warnings().is_empty());
    }

    #[test]
    fn load_config_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("baseline.toml");
        std::fs::write(&path, BASELINE).unwrap();
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg.m_antennas(), 8);
        assert!(matches!(load_config(dir.path().join("missing")), Err(Error::Io(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn serialization_round_trips(
                lambda_b in 1e-5f64..1.0,
                ratio in 0.01f64..100.0,
                m in 1usize..16,
                alpha in 2.01f64..6.0,
                gamma in 0.01f64..100.0,
                mu in 1.0f64..5.0,
                bits in proptest::option::of(0u32..=64),
                n in 1u64..100_000,
                seed in any::<u64>(),
            ) {
                let cfg = NetworkConfig::new(lambda_b, lambda_b / ratio, m, alpha, gamma)
                    .unwrap()
                    .with_mu(mu).unwrap()
                    .with_feedback_bits(bits).unwrap()
                    .with_n_realizations(n).unwrap()
                    .with_seed(seed);
                let back = NetworkConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
                prop_assert_eq!(back, cfg);
            }

            #[test]
            fn delta_is_two_over_alpha(alpha in 2.0001f64..20.0) {
                let cfg = NetworkConfig::new(1e-3, 1e-2, 2, alpha, 1.0).unwrap();
                prop_assert_eq!(cfg.delta(), 2.0 / alpha);
            }
        }
    }
}

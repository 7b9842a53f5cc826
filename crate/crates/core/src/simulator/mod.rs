//! Monte Carlo engine for the full physical model.
//!
//! Each realization samples a network ([`crate::geometry`]), applies a
//! coordination [`Strategy`], builds ZF precoders from (possibly RVQ-quantized)
//! channels and records whether the typical user's SIR clears the threshold.
//!
//! Interferers that do not null toward the typical user have a precoder
//! independent of their channel to it, so by rotational invariance their gain
//! is `Exp(1)`. [`PrecoderMode::Lazy`] draws those gains directly and builds
//! precoders only for the home BS and for BSs that null toward the typical
//! user; [`PrecoderMode::Full`] builds every precoder.

pub mod channel;
pub mod streams;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    build_fixed_number_requests, build_request_graph, grant_subset, resolve_requests, resolve_requests_with,
    sample_realization, NetworkRealization, Window,
};
use crate::params::NetworkConfig;
use channel::{complex_gaussian, inner, norm, rvq_quantize, rvq_quantize_codebook, zf_precoder, CVec};
use streams::{pair_key, stream, Tag};

/// Precoder rebuild attempts before a degenerate channel becomes an error.
const MAX_ATTEMPTS: u32 = 16;
/// Fraction of draws needing a resample above which a warning is attached.
const RESAMPLE_WARN_FRACTION: f64 = 1e-4;

/// Coordination strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// Request every active BS within `μ r_u`.
    UserCentric { mu: f64 },
    NonCoordination,
    /// Request the `n` nearest active interferers.
    FixedNumber { n: usize },
    /// Null toward the other served users in a random square cluster holding
    /// `mean_cluster_size` BSs on average.
    RandomClustering { mean_cluster_size: f64 },
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Strategy::UserCentric { mu } if !(mu >= 1.0 && mu.is_finite()) => {
                Err(Error::InvalidConfig(format!("mu >= 1 (got {mu})")))
            }
            Strategy::RandomClustering { mean_cluster_size: s } if !(s >= 1.0 && s.is_finite()) => {
                Err(Error::InvalidConfig(format!("cluster size >= 1 (got {s})")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Strategy::UserCentric { mu } => format!("user_centric(mu={mu})"),
            Strategy::NonCoordination => "non_coordination".into(),
            Strategy::FixedNumber { n } => format!("fixed_number(n={n})"),
            Strategy::RandomClustering { mean_cluster_size } => format!("random_clustering(s={mean_cluster_size})"),
        }
    }
}

/// A strategy together with the CSI regime it runs under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub strategy: Strategy,
    /// RVQ bits per channel; `None` is perfect CSI.
    pub feedback_bits: Option<u32>,
}

impl Scenario {
    pub fn perfect(strategy: Strategy) -> Self {
        Self { strategy, feedback_bits: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrecoderMode {
    #[default]
    Lazy,
    Full,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RvqMode {
    /// Quantization angle drawn from its exact law.
    #[default]
    ExactLaw,
    /// Explicit random codebook of `2^B` vectors; needs `B <= 12`.
    Codebook,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimOptions {
    pub precoders: PrecoderMode,
    pub rvq: RvqMode,
    /// Overrides the config's toroidal window, e.g. with a Euclidean guard-band window.
    pub window: Option<Window>,
}

/// Monte Carlo estimate of a success probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageEstimate {
    pub p_hat: f64,
    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub std_err: f64,
    pub n: u64,
    pub successes: u64,
    pub degenerate_resamples: u64,
    pub scenario: Scenario,
    pub config: NetworkConfig,
}

impl CoverageEstimate {
    fn new(successes: u64, resamples: u64, scenario: Scenario, config: &NetworkConfig) -> Self {
        let n = config.n_realizations();
        let p_hat = successes as f64 / n as f64;
        Self {
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
            n,
            successes,
            degenerate_resamples: resamples,
            scenario,
            config: config.clone(),
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        let frac = self.degenerate_resamples as f64 / self.n as f64;
        if frac > RESAMPLE_WARN_FRACTION {
            vec![format!("{} degenerate-channel resamples in {} draws", self.degenerate_resamples, self.n)]
        } else {
            Vec::new()
        }
    }
}

/// Outcome for the typical user in one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SirSample {
    /// `+∞` when no BS interferes.
    pub sir: f64,
    pub g0: f64,
    /// Users the home BS nulls toward.
    pub k_home: usize,
    /// Interferers nulling toward the typical user.
    pub nulling_interferers: usize,
    pub resamples: u32,
}

/// Gain from one active interferer to the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfererGain {
    pub bs: usize,
    pub gain: f64,
    pub nulls_typical: bool,
}

/// One sampled realization with its keyed random state.
#[derive(Debug, Clone)]
pub struct Draw {
    pub real: NetworkRealization,
    seed: u64,
    index: u64,
    m: usize,
    lambda_b: f64,
    path_loss: Vec<f64>,
    fading: Vec<f64>,
}

impl Draw {
    /// Realization `index` of `config`'s ensemble.
    pub fn sample(config: &NetworkConfig, index: u64, window: Option<Window>) -> Result<Self> {
        let window = match window {
            Some(w) => w,
            None => Window::new(config.window_side())?,
        };
        let mut rng = stream(config.seed(), index, Tag::Geometry, 0);
        let real = sample_realization(config.lambda_b(), config.lambda_u(), window, &mut rng)?;
        let origin = real.user_points[0];
        let half_alpha = 0.5 * config.alpha();
        let path_loss = real.bs_points.iter().map(|&b| real.window.dist2(origin, b).powf(-half_alpha)).collect();
        let mut frng = stream(config.seed(), index, Tag::Fading, 0);
        let fading = (0..real.n_bs()).map(|_| Exp1.sample(&mut frng)).collect();
        Ok(Self { real, seed: config.seed(), index, m: config.m_antennas(), lambda_b: config.lambda_b(), path_loss, fading })
    }

    fn rng(&self, tag: Tag, entity: u64) -> rand_chacha::ChaCha8Rng {
        stream(self.seed, self.index, tag, entity)
    }

    /// Sets `requests` and `nulling_targets` for `strategy`.
    pub fn apply(&mut self, strategy: Strategy) -> Result<()> {
        strategy.validate()?;
        let (seed, index) = (self.seed, self.index);
        let per_bs = |tag: Tag| move |b: usize| stream(seed, index, tag, b as u64);
        match strategy {
            Strategy::NonCoordination => self.real.clear_coordination(),
            Strategy::UserCentric { mu } => {
                build_request_graph(&mut self.real, mu);
                resolve_requests_with(&mut self.real, self.m, per_bs(Tag::Resolution));
            }
            Strategy::FixedNumber { n } => {
                build_fixed_number_requests(&mut self.real, n);
                resolve_requests_with(&mut self.real, self.m, per_bs(Tag::Resolution));
            }
            Strategy::RandomClustering { mean_cluster_size } => {
                let mut shift = self.rng(Tag::ClusterShift, 0);
                random_clustering_with(
                    &mut self.real,
                    mean_cluster_size,
                    self.m,
                    self.lambda_b,
                    &mut shift,
                    per_bs(Tag::ClusterDrop),
                );
            }
        }
        Ok(())
    }

    fn channel(&self, b: usize, u: usize, attempt: u32) -> CVec {
        complex_gaussian(self.m, &mut self.rng(Tag::Channel, pair_key(b, u, attempt)))
    }

    /// What BS `b` knows of its channel to `u`: the channel itself, or its RVQ direction.
    fn csi(&self, b: usize, u: usize, attempt: u32, bits: Option<u32>, rvq: RvqMode) -> Result<CVec> {
        let h = self.channel(b, u, attempt);
        let Some(bits) = bits else { return Ok(h) };
        let n = norm(&h);
        let dir: CVec = h.iter().map(|x| x / n).collect();
        let mut rng = self.rng(Tag::Quantization, pair_key(b, u, attempt));
        match rvq {
            RvqMode::ExactLaw => rvq_quantize(&dir, bits, &mut rng),
            RvqMode::Codebook => rvq_quantize_codebook(&dir, bits, &mut rng),
        }
    }

    /// Gain `|h_{b,0}^H w_b|²` with BS `b`'s precoder built from its own context.
    fn gain_to_typical(&self, b: usize, bits: Option<u32>, rvq: RvqMode) -> Result<(f64, u32)> {
        let served = self.real.scheduled_user[b].expect("precoders exist only at active BSs");
        for attempt in 0..MAX_ATTEMPTS {
            let signal = self.csi(b, served, attempt, bits, rvq)?;
            let nulled = self.real.nulling_targets[b]
                .iter()
                .map(|&t| self.csi(b, t, attempt, bits, rvq))
                .collect::<Result<Vec<_>>>()?;
            match zf_precoder(&signal, &nulled) {
                Ok(w) => {
                    let h0 = self.channel(b, 0, attempt);
                    return Ok((inner(&h0, &w).norm_sqr(), attempt));
                }
                Err(Error::DegenerateChannel) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::DegenerateChannel)
    }

    /// Typical-user SIR under the current coordination state.
    pub fn evaluate(&self, bits: Option<u32>, opts: &SimOptions) -> Result<SirSample> {
        self.evaluate_inner(bits, opts, None)
    }

    /// As [`Draw::evaluate`], also returning every active interferer's gain.
    pub fn evaluate_detailed(&self, bits: Option<u32>, opts: &SimOptions) -> Result<(SirSample, Vec<InterfererGain>)> {
        let mut gains = Vec::new();
        let s = self.evaluate_inner(bits, opts, Some(&mut gains))?;
        Ok((s, gains))
    }

    fn evaluate_inner(&self, bits: Option<u32>, opts: &SimOptions, mut record: Option<&mut Vec<InterfererGain>>) -> Result<SirSample> {
        if bits.is_some() && self.m < 2 {
            return Err(Error::InvalidConfig("limited feedback needs m_antennas >= 2".into()));
        }
        let home = self.real.typical_home();
        let (g0, mut resamples) = self.gain_to_typical(home, bits, opts.rvq)?;
        let mut interference = 0.0;
        let mut nulling = 0;
        for b in self.real.active_bs() {
            if b == home {
                continue;
            }
            let nulls = self.real.nulls_toward(b, 0);
            nulling += nulls as usize;
            let gain = match (nulls, bits, opts.precoders) {
                (true, None, PrecoderMode::Lazy) => 0.0,
                (false, _, PrecoderMode::Lazy) => self.fading[b],
                _ => {
                    let (g, a) = self.gain_to_typical(b, bits, opts.rvq)?;
                    resamples += a;
                    g
                }
            };
            if let Some(r) = record.as_deref_mut() {
                r.push(InterfererGain { bs: b, gain, nulls_typical: nulls });
            }
            interference += gain * self.path_loss[b];
        }
        let signal = g0 * self.path_loss[home];
        let sir = if interference > 0.0 { signal / interference } else { f64::INFINITY };
        Ok(SirSample { sir, g0, k_home: self.real.nulling_targets[home].len(), nulling_interferers: nulling, resamples })
    }
}

/// Fixed-number requests followed by DoF-capped resolution from `rng`.
pub fn fixed_number_requests<R: Rng + ?Sized>(real: &mut NetworkRealization, n_requests: usize, m_antennas: usize, rng: &mut R) {
    build_fixed_number_requests(real, n_requests);
    resolve_requests(real, m_antennas, rng);
}

/// Random BS clustering on a uniformly shifted square super-grid whose cells
/// hold `mean_cluster_size` BSs on average. Sizes up to 1 mean singleton clusters.
/// Returns the cluster id of every BS.
pub fn random_clustering<R: Rng + ?Sized>(
    real: &mut NetworkRealization,
    mean_cluster_size: f64,
    m_antennas: usize,
    lambda_b: f64,
    rng: &mut R,
) -> Vec<usize> {
    let clusters = cluster_ids(real, mean_cluster_size, lambda_b, rng);
    let cap = m_antennas.saturating_sub(1);
    fill_cluster_nulling(real, &clusters, cap, |_, req| grant_subset(req, cap, rng));
    clusters
}

fn random_clustering_with<R: Rng + ?Sized, D: Rng, G: FnMut(usize) -> D>(
    real: &mut NetworkRealization,
    mean_cluster_size: f64,
    m_antennas: usize,
    lambda_b: f64,
    shift_rng: &mut R,
    mut drop_rng: G,
) {
    let clusters = cluster_ids(real, mean_cluster_size, lambda_b, shift_rng);
    let cap = m_antennas.saturating_sub(1);
    fill_cluster_nulling(real, &clusters, cap, |b, req| grant_subset(req, cap, &mut drop_rng(b)));
}

/// Cluster id per BS. The super-grid has `round(L / sqrt(S/λ_b))` cells per side.
fn cluster_ids<R: Rng + ?Sized>(real: &NetworkRealization, mean_cluster_size: f64, lambda_b: f64, rng: &mut R) -> Vec<usize> {
    if mean_cluster_size <= 1.0 {
        return (0..real.n_bs()).collect();
    }
    let side = real.window.side();
    let per_side = ((side / (mean_cluster_size / lambda_b).sqrt()).round() as usize).max(1);
    let cell = side / per_side as f64;
    let shift = [rng.random_range(0.0..cell), rng.random_range(0.0..cell)];
    let coord = |x: f64, s: f64| (((x + 0.5 * side + s).rem_euclid(side) / cell).floor() as usize).min(per_side - 1);
    real.bs_points.iter().map(|p| coord(p[1], shift[1]) * per_side + coord(p[0], shift[0])).collect()
}

fn fill_cluster_nulling<F: FnMut(usize, &[usize]) -> Vec<usize>>(
    real: &mut NetworkRealization,
    clusters: &[usize],
    cap: usize,
    mut grant: F,
) {
    real.clear_coordination();
    let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for b in real.active_bs() {
        members.entry(clusters[b]).or_default().push(b);
    }
    for group in members.values() {
        if group.len() < 2 {
            continue;
        }
        for &b in group {
            let mut others: Vec<usize> =
                group.iter().filter(|&&x| x != b).filter_map(|&x| real.scheduled_user[x]).collect();
            others.sort_unstable();
            real.nulling_targets[b] = if others.len() <= cap { others.clone() } else { grant(b, &others) };
            real.requests[b] = others;
        }
    }
}

/// Success fraction of `strategy` under the config's CSI regime.
pub fn estimate_ps(config: &NetworkConfig, strategy: Strategy) -> Result<CoverageEstimate> {
    estimate_ps_with(config, strategy, &SimOptions::default())
}

pub fn estimate_ps_with(config: &NetworkConfig, strategy: Strategy, opts: &SimOptions) -> Result<CoverageEstimate> {
    let scenario = Scenario { strategy, feedback_bits: config.feedback_bits() };
    Ok(estimate_many(config, &[scenario], opts)?.remove(0))
}

/// Evaluates every scenario on the same realizations.
///
/// Realization `i` is drawn from streams keyed by `(config.seed, i)`, and
/// per-scenario success counts are summed as integers, so results do not
/// depend on the number of worker threads.
pub fn estimate_many(config: &NetworkConfig, scenarios: &[Scenario], opts: &SimOptions) -> Result<Vec<CoverageEstimate>> {
    for s in scenarios {
        s.strategy.validate()?;
        if let Some(b) = s.feedback_bits {
            if config.m_antennas() < 2 {
                return Err(Error::InvalidConfig("limited feedback needs m_antennas >= 2".into()));
            }
            if opts.rvq == RvqMode::Codebook && b > channel::MAX_CODEBOOK_BITS {
                return Err(Error::InvalidConfig(format!("codebook RVQ needs feedback_bits <= {}", channel::MAX_CODEBOOK_BITS)));
            }
        }
    }
    let k = scenarios.len();
    let gamma = config.sinr_threshold();
    let zero = || (vec![0u64; k], vec![0u64; k]);
    let (succ, res) = (0..config.n_realizations())
        .into_par_iter()
        .try_fold(zero, |(mut succ, mut res), i| -> Result<_> {
            let mut draw = Draw::sample(config, i, opts.window)?;
            let mut applied: Option<Strategy> = None;
            for (j, s) in scenarios.iter().enumerate() {
                if applied != Some(s.strategy) {
                    draw.apply(s.strategy)?;
                    applied = Some(s.strategy);
                }
                let out = draw.evaluate(s.feedback_bits, opts)?;
                succ[j] += (out.sir >= gamma) as u64;
                res[j] += out.resamples as u64;
            }
            Ok((succ, res))
        })
        .try_reduce(zero, |(mut a, mut ra), (b, rb)| {
            for j in 0..k {
                a[j] += b[j];
                ra[j] += rb[j];
            }
            Ok((a, ra))
        })?;
    Ok(scenarios
        .iter()
        .enumerate()
        .map(|(j, s)| CoverageEstimate::new(succ[j], res[j], *s, config))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small(n: u64) -> NetworkConfig {
        // 200 expected BSs keeps the unit tests quick.
        NetworkConfig::new(1e-3, 1e-2, 8, 4.0, 10.0)
            .unwrap()
            .with_window_side((200.0f64 / 1e-3).sqrt())
            .unwrap()
            .with_n_realizations(n)
            .unwrap()
            .with_seed(17)
    }

    #[test]
    fn deterministic_and_thread_count_invariant() {
        let cfg = small(200);
        let sc = [Scenario::perfect(Strategy::UserCentric { mu: 2.0 }), Scenario { strategy: Strategy::NonCoordination, feedback_bits: Some(6) }];
        let a = estimate_many(&cfg, &sc, &SimOptions::default()).unwrap();
        let b = estimate_many(&cfg, &sc, &SimOptions::default()).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| estimate_many(&cfg, &sc, &SimOptions::default()).unwrap());
        assert_eq!(a, c);
        let other = estimate_many(&cfg.clone().with_seed(18), &sc, &SimOptions::default()).unwrap();
        assert_ne!(a[0].successes, other[0].successes);
    }

    #[test]
    fn degenerate_parameters_reduce_to_non_coordination() {
        let cfg = small(300);
        let sc: Vec<Scenario> = [
            Strategy::NonCoordination,
            Strategy::UserCentric { mu: 1.0 },
            Strategy::FixedNumber { n: 0 },
            Strategy::RandomClustering { mean_cluster_size: 1.0 },
        ]
        .into_iter()
        .map(Scenario::perfect)
        .collect();
        let r = estimate_many(&cfg, &sc, &SimOptions::default()).unwrap();
        for e in &r[1..] {
            assert_eq!(e.successes, r[0].successes, "{:?}", e.scenario);
        }
    }

    #[test]
    fn lone_bs_gives_infinite_sir() {
        let w = Window::new(100.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let real = crate::geometry::associate_and_schedule(vec![[5.0, 5.0]], vec![[0.0, 0.0]], w, &mut rng).unwrap();
        let draw = Draw { real, seed: 0, index: 0, m: 4, lambda_b: 1e-4, path_loss: vec![50f64.powf(-2.0)], fading: vec![1.0] };
        let s = draw.evaluate(None, &SimOptions::default()).unwrap();
        assert_eq!(s.sir, f64::INFINITY);
        assert!(s.g0 > 0.0);
    }

    #[test]
    fn granted_nulling_removes_interference_exactly() {
        let cfg = small(1);
        let full = SimOptions { precoders: PrecoderMode::Full, ..Default::default() };
        let mut seen = 0;
        for i in 0..30 {
            let mut d = Draw::sample(&cfg, i, None).unwrap();
            d.apply(Strategy::UserCentric { mu: 2.0 }).unwrap();
            let (_, gains) = d.evaluate_detailed(None, &full).unwrap();
            for g in gains.iter().filter(|g| g.nulls_typical) {
                assert!(g.gain < 1e-20, "{}", g.gain);
                seen += 1;
            }
            let (_, lf) = d.evaluate_detailed(Some(4), &full).unwrap();
            assert!(lf.iter().filter(|g| g.nulls_typical).all(|g| g.gain > 0.0));
        }
        assert!(seen > 20);
    }

    #[test]
    fn lazy_and_full_precoders_agree_statistically() {
        let cfg = small(1500);
        let sc = [Scenario::perfect(Strategy::UserCentric { mu: 2.0 }), Scenario { strategy: Strategy::UserCentric { mu: 2.0 }, feedback_bits: Some(8) }];
        let lazy = estimate_many(&cfg, &sc, &SimOptions::default()).unwrap();
        let full = estimate_many(&cfg, &sc, &SimOptions { precoders: PrecoderMode::Full, ..Default::default() }).unwrap();
        for (a, b) in lazy.iter().zip(&full) {
            let se = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
            assert!((a.p_hat - b.p_hat).abs() < 3.0 * se, "{} vs {}", a.p_hat, b.p_hat);
        }
    }

    #[test]
    fn tiny_threshold_always_succeeds() {
        let cfg = small(200).with_sinr_threshold(1e-9).unwrap();
        let e = estimate_ps(&cfg, Strategy::NonCoordination).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert_eq!(e.std_err, 0.0);
    }

    #[test]
    fn clusters_partition_and_null_within() {
        let cfg = small(1);
        let mut d = Draw::sample(&cfg, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ids = random_clustering(&mut d.real, 4.0, 8, 1e-3, &mut rng);
        assert_eq!(ids.len(), d.real.n_bs());
        let per_side = (d.real.window.side() / (4.0f64 / 1e-3).sqrt()).round() as usize;
        assert!(ids.iter().all(|&c| c < per_side * per_side));
        for b in d.real.active_bs() {
            for &u in &d.real.nulling_targets[b] {
                let x = d.real.home_bs[u];
                assert_eq!(ids[x], ids[b]);
                assert_ne!(x, b);
            }
            assert!(d.real.nulling_targets[b].len() <= 7);
        }
        let mean = ids.len() as f64 / (per_side * per_side) as f64;
        assert!((mean - 4.0).abs() < 1.0, "{mean}");
    }

    #[test]
    fn invalid_scenarios_rejected() {
        let cfg = small(10);
        assert!(estimate_ps(&cfg, Strategy::UserCentric { mu: 0.5 }).is_err());
        assert!(estimate_ps(&cfg, Strategy::RandomClustering { mean_cluster_size: 0.5 }).is_err());
        let one = cfg.clone().with_m_antennas(1).unwrap();
        assert!(estimate_many(&one, &[Scenario { strategy: Strategy::NonCoordination, feedback_bits: Some(3) }], &SimOptions::default()).is_err());
        let book = SimOptions { rvq: RvqMode::Codebook, ..Default::default() };
        assert!(estimate_many(&cfg, &[Scenario { strategy: Strategy::NonCoordination, feedback_bits: Some(13) }], &book).is_err());
    }

    #[test]
    fn single_antenna_never_nulls() {
        let cfg = small(100).with_m_antennas(1).unwrap();
        let a = estimate_ps(&cfg, Strategy::NonCoordination).unwrap();
        let b = estimate_ps(&cfg, Strategy::UserCentric { mu: 3.0 }).unwrap();
        assert_eq!(a.successes, b.successes);
    }
}

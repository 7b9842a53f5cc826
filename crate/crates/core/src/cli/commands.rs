//! Subcommand computations, independent of argument parsing and file I/O.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::output::{CurvePoint, Provenance, PsCurve, Report, Table};
use crate::analytics::{activity_probability, mean_requests, ps_analytic, requests_received_pmf};
use crate::error::{Error, Result};
use crate::optimizer::{min_density_ratio_with, mu_grid, optimal_mu, optimal_mu_analytic, DensitySearch, DensityStrategy};
use crate::params::NetworkConfig;
use crate::simulator::{estimate_many, CoverageEstimate, Draw, Scenario, SimOptions, Strategy};
use crate::stats::{chi_square, total_variation};

/// Offset separating the tuning ensemble's seed from the evaluation seed.
pub const TUNING_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;
/// Realizations per candidate when tuning baseline parameters.
pub const DEFAULT_TUNING_REALIZATIONS: u64 = 2_000;
/// Cluster sizes tried when tuning random clustering.
pub const CLUSTER_SIZE_GRID: [f64; 11] = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0];
/// Significance level of the `pmf-check` chi-square test.
pub const PMF_CHECK_LEVEL: f64 = 0.01;

/// Strategy family swept by `simulate-curve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    UserCentric,
    NonCoordination,
    FixedNumber,
    RandomClustering,
}

impl StrategyKind {
    /// Strategy with its parameter set to `x`; integer parameters must be integral.
    pub fn at(self, x: f64) -> Result<Strategy> {
        match self {
            StrategyKind::UserCentric => Ok(Strategy::UserCentric { mu: x }),
            StrategyKind::RandomClustering => Ok(Strategy::RandomClustering { mean_cluster_size: x }),
            StrategyKind::FixedNumber => Ok(Strategy::FixedNumber { n: integral(x, "n_requests")? as usize }),
            StrategyKind::NonCoordination => {
                Err(Error::InvalidConfig("non-coordination has no parameter to sweep".into()))
            }
        }
    }

    fn sweep_column(self) -> &'static str {
        match self {
            StrategyKind::UserCentric | StrategyKind::NonCoordination => "mu[-]",
            StrategyKind::FixedNumber => "n_requests[bs]",
            StrategyKind::RandomClustering => "cluster_size[bs]",
        }
    }
}

/// Engine evaluating the objective of `optimize-mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Simulated,
}

pub fn integral(x: f64, what: &str) -> Result<u64> {
    if x >= 0.0 && (x - x.round()).abs() < 1e-9 && x < 1e15 {
        Ok(x.round() as u64)
    } else {
        Err(Error::InvalidConfig(format!("{what} must be a nonnegative integer, got {x}")))
    }
}

/// `from, from + step, ...` up to `to`, rounded to ten decimals.
pub fn sweep_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step > 0.0 && step.is_finite() && to >= from) {
        return Err(Error::InvalidConfig(format!("sweep needs finite from <= to and step > 0, got {from}..{to} by {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor();
    if n > 1e5 {
        return Err(Error::InvalidConfig(format!("sweep of {n} points is too long")));
    }
    Ok((0..=n as usize)
        .map(|i| {
            let x = from + i as f64 * step;
            format!("{x:.10}").parse().expect("formatted float parses")
        })
        .collect())
}

fn point(x: f64, e: &CoverageEstimate) -> CurvePoint {
    CurvePoint { x, ps: e.p_hat, std_err: Some(e.std_err) }
}

fn estimate_warnings(report: &mut Report, estimates: &[CoverageEstimate]) {
    for e in estimates {
        let w = e.warnings().into_iter().map(|w| format!("{}: {w}", e.scenario.strategy.label()));
        report.warn(w);
    }
}

/// Analytical `p_s` against `μ`.
pub fn analytic_curve(config: &NetworkConfig, mus: &[f64]) -> Result<Report> {
    let results = mus
        .par_iter()
        .map(|&mu| ps_analytic(&config.clone().with_mu(mu)?))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report { table: Table::new(&["mu[-]", "ps[-]", "k_bar[requests]", "epsilon[-]"]), ..Default::default() };
    let mut points = Vec::new();
    for (&mu, r) in mus.iter().zip(&results) {
        report.table.push(vec![mu.into(), r.ps.into(), r.k_bar.into(), r.epsilon.into()]);
        points.push(CurvePoint { x: mu, ps: r.ps, std_err: None });
    }
    report.curves.push(PsCurve::new("mu", "user_centric", Provenance::Analytic, points, config)?);
    report.warn(config.warnings());
    Ok(report)
}

/// Simulated `p_s` against the parameter of `kind`, on common realizations.
pub fn simulate_curve(config: &NetworkConfig, kind: StrategyKind, xs: &[f64], opts: &SimOptions) -> Result<Report> {
    let scenarios = xs
        .iter()
        .map(|&x| Ok(Scenario { strategy: kind.at(x)?, feedback_bits: config.feedback_bits() }))
        .collect::<Result<Vec<_>>>()?;
    let estimates = estimate_many(config, &scenarios, opts)?;
    let with_analytic = kind == StrategyKind::UserCentric;
    let mut columns = vec![kind.sweep_column(), "ps[-]", "std_err[-]", "n[realizations]"];
    if with_analytic {
        columns.push("ps_analytic[-]");
    }
    let mut report = Report { table: Table::new(&columns), ..Default::default() };
    for (&x, e) in xs.iter().zip(&estimates) {
        let mut row = vec![x.into(), e.p_hat.into(), e.std_err.into(), e.n.into()];
        if with_analytic {
            row.push(ps_analytic(&config.clone().with_mu(x)?)?.ps.into());
        }
        report.table.push(row);
    }
    let points = xs.iter().zip(&estimates).map(|(&x, e)| point(x, e)).collect();
    let sweep = kind.sweep_column().split('[').next().unwrap_or_default();
    let label = kind.at(xs[0])?.label();
    let label = label.split('(').next().unwrap_or_default();
    report.curves.push(PsCurve::new(sweep, label, Provenance::Simulated, points, config)?);
    report.warn(config.warnings());
    estimate_warnings(&mut report, &estimates);
    Ok(report)
}

/// Searches `μ* = argmax p_s(μ)` with the chosen engine.
pub fn optimize_mu(config: &NetworkConfig, engine: Engine, mu_max: f64, opts: &SimOptions) -> Result<Report> {
    let n = config.n_realizations() as f64;
    let result = match engine {
        Engine::Analytic => optimal_mu_analytic(config, mu_max)?,
        Engine::Simulated => {
            let grid = mu_grid(mu_max);
            let scenarios: Vec<Scenario> = grid
                .iter()
                .map(|&mu| Scenario { strategy: Strategy::UserCentric { mu }, feedback_bits: config.feedback_bits() })
                .collect();
            let cached = estimate_many(config, &scenarios, opts)?;
            optimal_mu(mu_max, |mu| {
                if let Some(i) = grid.iter().position(|&g| g == mu) {
                    return Ok(cached[i].p_hat);
                }
                let s = Scenario { strategy: Strategy::UserCentric { mu }, feedback_bits: config.feedback_bits() };
                Ok(estimate_many(config, &[s], opts)?[0].p_hat)
            })?
        }
    };
    let simulated = engine == Engine::Simulated;
    let mut report = Report {
        table: Table::new(if simulated { &["mu[-]", "ps[-]", "std_err[-]"] } else { &["mu[-]", "ps[-]"] }),
        ..Default::default()
    };
    let mut points = Vec::new();
    for &(mu, ps) in &result.trace {
        let se = (ps * (1.0 - ps) / n).sqrt();
        let mut row = vec![mu.into(), ps.into()];
        if simulated {
            row.push(se.into());
        }
        report.table.push(row);
        points.push(CurvePoint { x: mu, ps, std_err: simulated.then_some(se) });
    }
    let provenance = if simulated { Provenance::Simulated } else { Provenance::Analytic };
    report.curves.push(PsCurve::new("mu", "user_centric", provenance, points, config)?);
    let at_one = result.trace.iter().find(|t| t.0 == 1.0).map(|t| t.1);
    report.note("engine", if simulated { "simulated" } else { "analytic" });
    report.note("mu_star", result.argmax);
    report.note("ps_star", result.value);
    if let Some(p1) = at_one {
        report.note("ps_mu_1", p1);
        report.note("relative_gain", result.value / p1 - 1.0);
    }
    report.warn(config.warnings());
    Ok(report)
}

/// Parameters and sample sizes for `compare-strategies`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub tuning_realizations: u64,
    pub mu_max: f64,
    /// Pins `N` instead of tuning it.
    pub n_requests: Option<usize>,
    /// Pins the cluster size instead of tuning it.
    pub cluster_size: Option<f64>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self { tuning_realizations: DEFAULT_TUNING_REALIZATIONS, mu_max: crate::optimizer::DEFAULT_MU_MAX, n_requests: None, cluster_size: None }
    }
}

/// Tuned parameters of the three coordinated strategies at one density ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuned {
    pub mu_hat: f64,
    pub mu_star: f64,
    pub n_star: usize,
    pub cluster_star: f64,
}

fn best<T: Copy>(candidates: &[T], estimates: &[CoverageEstimate]) -> T {
    let mut best = 0;
    for (i, e) in estimates.iter().enumerate() {
        if e.p_hat > estimates[best].p_hat {
            best = i;
        }
    }
    candidates[best]
}

/// Tunes each strategy on an ensemble independent of the evaluation one.
pub fn tune_strategies(config: &NetworkConfig, compare: &CompareOptions, opts: &SimOptions) -> Result<Tuned> {
    let mu_hat = optimal_mu_analytic(config, compare.mu_max)?.argmax;
    let tuning = config
        .clone()
        .with_n_realizations(compare.tuning_realizations)?
        .with_seed(config.seed().wrapping_add(TUNING_SEED_OFFSET));
    let bits = config.feedback_bits();
    let mus = mu_grid(compare.mu_max);
    let ns: Vec<usize> = match compare.n_requests {
        Some(n) => vec![n],
        None => (1..=(2 * config.m_antennas().saturating_sub(1)).max(1)).collect(),
    };
    let sizes: Vec<f64> = match compare.cluster_size {
        Some(s) => vec![s],
        None => CLUSTER_SIZE_GRID.to_vec(),
    };
    let scenarios: Vec<Scenario> = mus
        .iter()
        .map(|&mu| Strategy::UserCentric { mu })
        .chain(ns.iter().map(|&n| Strategy::FixedNumber { n }))
        .chain(sizes.iter().map(|&s| Strategy::RandomClustering { mean_cluster_size: s }))
        .map(|strategy| Scenario { strategy, feedback_bits: bits })
        .collect();
    let est = estimate_many(&tuning, &scenarios, opts)?;
    let (uc, rest) = est.split_at(mus.len());
    let (fixed, clustered) = rest.split_at(ns.len());
    Ok(Tuned { mu_hat, mu_star: best(&mus, uc), n_star: best(&ns, fixed), cluster_star: best(&sizes, clustered) })
}

/// Final estimates in the order UC(μ̂*), UC(μ*), fixed-number, clustering, non-coordination.
pub fn evaluate_tuned(config: &NetworkConfig, tuned: &Tuned, opts: &SimOptions) -> Result<Vec<CoverageEstimate>> {
    let bits = config.feedback_bits();
    let scenarios = [
        Strategy::UserCentric { mu: tuned.mu_hat },
        Strategy::UserCentric { mu: tuned.mu_star },
        Strategy::FixedNumber { n: tuned.n_star },
        Strategy::RandomClustering { mean_cluster_size: tuned.cluster_star },
        Strategy::NonCoordination,
    ]
    .map(|strategy| Scenario { strategy, feedback_bits: bits });
    estimate_many(config, &scenarios, opts)
}

/// Four strategies at their tuned parameters against `ρ`.
pub fn compare_strategies(config: &NetworkConfig, rhos: &[f64], compare: &CompareOptions, opts: &SimOptions) -> Result<Report> {
    let mut report = Report {
        table: Table::new(&[
            "rho[bs/user]",
            "mu_hat[-]",
            "ps_user_centric_mu_hat[-]",
            "std_err_user_centric_mu_hat[-]",
            "mu_star[-]",
            "ps_user_centric[-]",
            "std_err_user_centric[-]",
            "n_star[bs]",
            "ps_fixed_number[-]",
            "std_err_fixed_number[-]",
            "cluster_size_star[bs]",
            "ps_random_clustering[-]",
            "std_err_random_clustering[-]",
            "ps_non_coordination[-]",
            "std_err_non_coordination[-]",
        ]),
        ..Default::default()
    };
    let labels = ["user_centric_mu_hat", "user_centric", "fixed_number", "random_clustering", "non_coordination"];
    let mut series: Vec<Vec<CurvePoint>> = vec![Vec::new(); labels.len()];
    for &rho in rhos {
        let at_rho = config.clone().with_rho(rho)?;
        let tuned = tune_strategies(&at_rho, compare, opts)?;
        let e = evaluate_tuned(&at_rho, &tuned, opts)?;
        report.table.push(vec![
            rho.into(),
            tuned.mu_hat.into(),
            e[0].p_hat.into(),
            e[0].std_err.into(),
            tuned.mu_star.into(),
            e[1].p_hat.into(),
            e[1].std_err.into(),
            tuned.n_star.into(),
            e[2].p_hat.into(),
            e[2].std_err.into(),
            tuned.cluster_star.into(),
            e[3].p_hat.into(),
            e[3].std_err.into(),
            e[4].p_hat.into(),
            e[4].std_err.into(),
        ]);
        for (s, est) in series.iter_mut().zip(&e) {
            s.push(point(rho, est));
        }
        report.warn(at_rho.warnings());
        estimate_warnings(&mut report, &e);
    }
    for (label, points) in labels.iter().zip(series) {
        report.curves.push(PsCurve::new("rho", label, Provenance::Simulated, points, config)?);
    }
    report.note("tuning_realizations", compare.tuning_realizations);
    Ok(report)
}

/// `p_s` against the number of feedback bits, both engines.
pub fn feedback_sweep(config: &NetworkConfig, bits: &[u64], mu_max: f64, opts: &SimOptions) -> Result<Report> {
    let perfect = config.clone().with_feedback_bits(None)?;
    let mu_perfect = optimal_mu_analytic(&perfect, mu_max)?.argmax;
    let mut rows = Vec::new();
    let mut scenarios = vec![
        Scenario::perfect(Strategy::UserCentric { mu: mu_perfect }),
        Scenario::perfect(Strategy::NonCoordination),
    ];
    for &b in bits {
        let b = u32::try_from(b).map_err(|_| Error::InvalidConfig(format!("feedback_bits {b} too large")))?;
        let lf = perfect.clone().with_feedback_bits(Some(b))?;
        let opt = optimal_mu_analytic(&lf, mu_max)?;
        let nc = ps_analytic(&lf.clone().with_mu(1.0)?)?.ps;
        rows.push((b, opt.argmax, opt.value, nc));
        scenarios.push(Scenario { strategy: Strategy::UserCentric { mu: opt.argmax }, feedback_bits: Some(b) });
    }
    scenarios.extend(bits.iter().map(|&b| Scenario { strategy: Strategy::NonCoordination, feedback_bits: Some(b as u32) }));
    let est = estimate_many(&perfect, &scenarios, opts)?;
    let k = bits.len();
    let (uc, nc) = (&est[2..2 + k], &est[2 + k..]);
    let mut report = Report {
        table: Table::new(&[
            "feedback_bits[bit]",
            "mu_hat[-]",
            "ps_user_centric[-]",
            "std_err_user_centric[-]",
            "ps_non_coordination[-]",
            "std_err_non_coordination[-]",
            "ps_user_centric_analytic[-]",
            "ps_non_coordination_analytic[-]",
        ]),
        ..Default::default()
    };
    for (i, &(b, mu, ps_uc, ps_nc)) in rows.iter().enumerate() {
        report.table.push(vec![
            (b as u64).into(),
            mu.into(),
            uc[i].p_hat.into(),
            uc[i].std_err.into(),
            nc[i].p_hat.into(),
            nc[i].std_err.into(),
            ps_uc.into(),
            ps_nc.into(),
        ]);
    }
    let xs: Vec<f64> = bits.iter().map(|&b| b as f64).collect();
    let sim = |e: &[CoverageEstimate]| xs.iter().zip(e).map(|(&x, e)| point(x, e)).collect::<Vec<_>>();
    let ana = |f: fn(&(u32, f64, f64, f64)) -> f64| {
        xs.iter().zip(&rows).map(|(&x, r)| CurvePoint { x, ps: f(r), std_err: None }).collect::<Vec<_>>()
    };
    report.curves.push(PsCurve::new("feedback_bits", "user_centric", Provenance::Simulated, sim(uc), &perfect)?);
    report.curves.push(PsCurve::new("feedback_bits", "non_coordination", Provenance::Simulated, sim(nc), &perfect)?);
    report.curves.push(PsCurve::new("feedback_bits", "user_centric", Provenance::Analytic, ana(|r| r.2), &perfect)?);
    report.curves.push(PsCurve::new("feedback_bits", "non_coordination", Provenance::Analytic, ana(|r| r.3), &perfect)?);
    report.note("mu_hat_perfect_csi", mu_perfect);
    report.note("ps_user_centric_perfect_csi", est[0].p_hat);
    report.note("std_err_user_centric_perfect_csi", est[0].std_err);
    report.note("ps_non_coordination_perfect_csi", est[1].p_hat);
    report.note("std_err_non_coordination_perfect_csi", est[1].std_err);
    report.warn(perfect.warnings());
    estimate_warnings(&mut report, &est);
    Ok(report)
}

/// Minimal `ρ` reaching `target_ps` for each antenna count, both strategies.
pub fn density_tradeoff(config: &NetworkConfig, antennas: &[u64], target_ps: f64, search: &DensitySearch) -> Result<Report> {
    let rows = antennas
        .par_iter()
        .map(|&m| {
            let cfg = config.clone().with_m_antennas(m as usize)?;
            let proposed = min_density_ratio_with(&cfg, target_ps, DensityStrategy::Proposed, search)?;
            let nc = min_density_ratio_with(&cfg, target_ps, DensityStrategy::NonCoordination, search)?;
            let mu_hat = optimal_mu_analytic(&cfg.clone().with_rho(proposed.argmax)?, search.mu_max)?.argmax;
            Ok((m, proposed, nc, mu_hat))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report {
        table: Table::new(&[
            "m_antennas[antennas]",
            "rho_min_proposed[bs/user]",
            "mu_hat[-]",
            "rho_min_non_coordination[bs/user]",
            "ratio[-]",
            "feasible_proposed",
            "feasible_non_coordination",
        ]),
        ..Default::default()
    };
    for (m, p, nc, mu_hat) in &rows {
        report.table.push(vec![
            (*m).into(),
            p.argmax.into(),
            (*mu_hat).into(),
            nc.argmax.into(),
            (p.argmax / nc.argmax).into(),
            p.feasible.into(),
            nc.feasible.into(),
        ]);
        if !(p.feasible && nc.feasible) {
            report.warn([format!("target p_s = {target_ps} unreachable below rho = {} at M = {m}", search.rho_cap)]);
        }
    }
    report.note("target_ps", target_ps);
    Ok(report)
}

/// Empirical pmf of the requests received by the typical user's home BS.
pub fn requests_pmf(config: &NetworkConfig) -> Result<Vec<u64>> {
    let mu = config.mu();
    let counts = (0..config.n_realizations())
        .into_par_iter()
        .map(|i| {
            let mut draw = Draw::sample(config, i, None)?;
            draw.apply(Strategy::UserCentric { mu })?;
            Ok(draw.real.requests[draw.real.typical_home()].len())
        })
        .try_fold(BTreeMap::new, |mut acc: BTreeMap<usize, u64>, k: Result<usize>| {
            *acc.entry(k?).or_default() += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            Ok(a)
        })?;
    let kmax = counts.keys().next_back().copied().unwrap_or(0);
    Ok((0..=kmax).map(|k| counts.get(&k).copied().unwrap_or(0)).collect())
}

/// Empirical against Poisson pmf of the requests received by the home BS.
pub fn pmf_check(config: &NetworkConfig) -> Result<Report> {
    let counts = requests_pmf(config)?;
    let n = config.n_realizations() as f64;
    let k_bar = mean_requests(activity_probability(config.rho())?, config.mu())?;
    let mut kmax = counts.len().saturating_sub(1);
    let mut cdf: f64 = (0..=kmax).map(|k| requests_received_pmf(k_bar, k as u64)).sum();
    while cdf < 1.0 - 1e-9 {
        kmax += 1;
        cdf += requests_received_pmf(k_bar, kmax as u64);
    }
    let empirical: Vec<f64> = (0..=kmax).map(|k| counts.get(k).copied().unwrap_or(0) as f64 / n).collect();
    let poisson: Vec<f64> = (0..=kmax).map(|k| requests_received_pmf(k_bar, k as u64)).collect();
    let mut report = Report {
        table: Table::new(&["k[requests]", "empirical_pmf[-]", "poisson_pmf[-]", "count[realizations]"]),
        ..Default::default()
    };
    for k in 0..=kmax {
        report.table.push(vec![k.into(), empirical[k].into(), poisson[k].into(), counts.get(k).copied().unwrap_or(0).into()]);
    }
    let full_counts: Vec<u64> = (0..=kmax).map(|k| counts.get(k).copied().unwrap_or(0)).collect();
    let mean = full_counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / n;
    report.note("k_bar", k_bar);
    report.note("empirical_mean", mean);
    report.note("tv_distance", total_variation(&empirical, &poisson));
    match chi_square(&full_counts, &poisson, PMF_CHECK_LEVEL) {
        Ok(chi) => {
            report.note("chi_square", chi.statistic);
            report.note("chi_square_dof", chi.dof);
            report.note("chi_square_critical", chi.critical);
            report.note("chi_square_passes", chi.passes());
        }
        Err(e) => report.warn([format!("chi-square test skipped: {e}")]),
    }
    report.warn(config.warnings());
    Ok(report)
}

//! C ABI over the `ucin` engines.
//!
//! Scenarios live behind opaque [`UcinConfig`] handles created by the
//! `ucin_config_*` constructors and released with [`ucin_config_free`]. Every
//! fallible call returns a [`UcinStatus`]; after a failure,
//! [`ucin_last_error_message`] describes it for the calling thread. Output
//! parameters are written only on success.
//!
//! Strategy selectors are passed as `uint32_t` holding a [`UcinStrategy`] or
//! [`UcinDensityStrategy`] value, so out-of-range input is reported rather than
//! being undefined behaviour.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ucin::analytics::ps_analytic;
use ucin::optimizer::{min_density_ratio, optimal_mu_analytic, DensityStrategy, OptimizationResult};
use ucin::simulator::{estimate_ps, Strategy};
use ucin::{load_config, Error, NetworkConfig};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    Parse = 3,
    Io = 4,
    Domain = 5,
    Quadrature = 6,
    Numerical = 7,
    DegenerateChannel = 8,
    EmptyNetwork = 9,
    InvalidUtf8 = 10,
    Panic = 11,
}

/// Coordination strategy selector for [`ucin_estimate_ps`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcinStrategy {
    /// `param` is the IN range coefficient `mu >= 1`.
    UserCentric = 0,
    /// `param` is ignored.
    NonCoordination = 1,
    /// `param` is the number of requested interferers, a nonnegative integer.
    FixedNumber = 2,
    /// `param` is the mean cluster size in BSs.
    RandomClustering = 3,
}

/// Strategy selector for [`ucin_min_density_ratio`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcinDensityStrategy {
    Proposed = 0,
    NonCoordination = 1,
}

/// Monte Carlo success probability.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcinEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub n: u64,
    pub successes: u64,
}

/// Outcome of a one-dimensional search.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcinOptimum {
    pub argmax: f64,
    pub value: f64,
    pub feasible: bool,
}

impl From<OptimizationResult> for UcinOptimum {
    fn from(r: OptimizationResult) -> Self {
        Self { argmax: r.argmax, value: r.value, feasible: r.feasible }
    }
}

/// Opaque network scenario.
pub struct UcinConfig {
    inner: NetworkConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn engine_status(e: &Error) -> UcinStatus {
    match e {
        Error::InvalidConfig(_) => UcinStatus::InvalidConfig,
        Error::Parse(_) => UcinStatus::Parse,
        Error::Io(_) => UcinStatus::Io,
        Error::Domain(_) => UcinStatus::Domain,
        Error::Quadrature { .. } => UcinStatus::Quadrature,
        Error::Numerical(_) => UcinStatus::Numerical,
        Error::DegenerateChannel => UcinStatus::DegenerateChannel,
        Error::EmptyNetwork => UcinStatus::EmptyNetwork,
        Error::Evaluator { source, .. } => engine_status(source),
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> UcinStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return UcinStatus::Ok,
        Ok(Err(Failure::Null(what))) => (UcinStatus::NullPointer, format!("null pointer: {what}")),
        Ok(Err(Failure::Utf8(what))) => (UcinStatus::InvalidUtf8, format!("{what} is not valid UTF-8")),
        Ok(Err(Failure::Engine(e))) => (engine_status(&e), e.to_string()),
        Err(_) => (UcinStatus::Panic, "internal panic".to_string()),
    };
    set_last_error(msg);
    status
}

unsafe fn config_ref<'a>(cfg: *const UcinConfig) -> Result<&'a NetworkConfig, Failure> {
    cfg.as_ref().map(|c| &c.inner).ok_or(Failure::Null("config"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed(config: NetworkConfig) -> *mut UcinConfig {
    Box::into_raw(Box::new(UcinConfig { inner: config }))
}

unsafe fn update<F: FnOnce(NetworkConfig) -> ucin::Result<NetworkConfig>>(cfg: *mut UcinConfig, f: F) -> UcinStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or(Failure::Null("config"))?;
        c.inner = f(c.inner.clone())?;
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ucin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the calling thread's most recent failure, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ucin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Perfect-CSI scenario with `mu = 1` and default window, sample count and seed.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_new(
    lambda_b: f64,
    lambda_u: f64,
    m_antennas: u32,
    alpha: f64,
    sinr_threshold: f64,
    out: *mut *mut UcinConfig,
) -> UcinStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let cfg = NetworkConfig::new(lambda_b, lambda_u, m_antennas as usize, alpha, sinr_threshold)?;
        write_out(out, boxed(cfg), "out")
    })
}

/// Parses a flat `key = value` config.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_from_toml(text: *const c_char, out: *mut *mut UcinConfig) -> UcinStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        write_out(out, boxed(NetworkConfig::from_toml_str(text)?), "out")
    })
}

/// Reads a config file.
///
/// # Safety
/// `path` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_load(path: *const c_char, out: *mut *mut UcinConfig) -> UcinStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        write_out(out, boxed(load_config(path)?), "out")
    })
}

/// # Safety
/// `cfg` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_clone(cfg: *const UcinConfig, out: *mut *mut UcinConfig) -> UcinStatus {
    guard(|| {
        let c = config_ref(cfg)?.clone();
        write_out(out, boxed(c), "out")
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `cfg` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_free(cfg: *mut UcinConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Serializes the config in the flat file format; free with [`ucin_string_free`].
///
/// # Safety
/// `cfg` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_to_toml(cfg: *const UcinConfig, out: *mut *mut c_char) -> UcinStatus {
    guard(|| {
        let text = config_ref(cfg)?.to_toml_string();
        let c = CString::new(text).map_err(|e| Error::Parse(e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// Frees a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from [`ucin_config_to_toml`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ucin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_mu(cfg: *mut UcinConfig, mu: f64) -> UcinStatus {
    update(cfg, |c| c.with_mu(mu))
}

/// Sets the linear SIR threshold.
///
/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_sinr_threshold(cfg: *mut UcinConfig, sinr_threshold: f64) -> UcinStatus {
    update(cfg, |c| c.with_sinr_threshold(sinr_threshold))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_m_antennas(cfg: *mut UcinConfig, m_antennas: u32) -> UcinStatus {
    update(cfg, |c| c.with_m_antennas(m_antennas as usize))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_alpha(cfg: *mut UcinConfig, alpha: f64) -> UcinStatus {
    update(cfg, |c| c.with_alpha(alpha))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_densities(cfg: *mut UcinConfig, lambda_b: f64, lambda_u: f64) -> UcinStatus {
    update(cfg, |c| c.with_densities(lambda_b, lambda_u))
}

/// Sets RVQ feedback bits; a negative value selects perfect CSI.
///
/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_feedback_bits(cfg: *mut UcinConfig, bits: i32) -> UcinStatus {
    update(cfg, |c| c.with_feedback_bits(u32::try_from(bits).ok()))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_window_side(cfg: *mut UcinConfig, side: f64) -> UcinStatus {
    update(cfg, |c| c.with_window_side(side))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_n_realizations(cfg: *mut UcinConfig, n: u64) -> UcinStatus {
    update(cfg, |c| c.with_n_realizations(n))
}

/// # Safety
/// `cfg` must be NULL or a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ucin_config_set_seed(cfg: *mut UcinConfig, seed: u64) -> UcinStatus {
    update(cfg, |c| Ok(c.with_seed(seed)))
}

/// Analytical success probability, perfect or limited feedback by the config.
///
/// # Safety
/// `cfg` must be NULL or a live handle; `out_ps` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_ps_analytic(cfg: *const UcinConfig, out_ps: *mut f64) -> UcinStatus {
    guard(|| {
        let ps = ps_analytic(config_ref(cfg)?)?.ps;
        write_out(out_ps, ps, "out_ps")
    })
}

/// Analytical `mu` maximizing the success probability on `[1, mu_max]`.
///
/// # Safety
/// `cfg` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_optimal_mu(cfg: *const UcinConfig, mu_max: f64, out: *mut UcinOptimum) -> UcinStatus {
    guard(|| {
        let r = optimal_mu_analytic(config_ref(cfg)?, mu_max)?;
        write_out(out, r.into(), "out")
    })
}

/// Smallest BS-user density ratio whose analytical success probability reaches `target_ps`.
///
/// `strategy` holds a [`UcinDensityStrategy`] value.
///
/// # Safety
/// `cfg` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_min_density_ratio(
    cfg: *const UcinConfig,
    target_ps: f64,
    strategy: u32,
    out: *mut UcinOptimum,
) -> UcinStatus {
    guard(|| {
        let strategy = match strategy {
            0 => DensityStrategy::Proposed,
            1 => DensityStrategy::NonCoordination,
            s => return Err(Error::Domain(format!("unknown density strategy {s}")).into()),
        };
        let r = min_density_ratio(config_ref(cfg)?, target_ps, strategy)?;
        write_out(out, r.into(), "out")
    })
}

/// Monte Carlo success probability of a strategy under the config's CSI regime.
///
/// `strategy` holds a [`UcinStrategy`] value whose parameter is `param`.
///
/// # Safety
/// `cfg` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ucin_estimate_ps(
    cfg: *const UcinConfig,
    strategy: u32,
    param: f64,
    out: *mut UcinEstimate,
) -> UcinStatus {
    guard(|| {
        let strategy = match strategy {
            0 => Strategy::UserCentric { mu: param },
            1 => Strategy::NonCoordination,
            2 if param >= 0.0 && param.fract() == 0.0 && param < 1e9 => Strategy::FixedNumber { n: param as usize },
            2 => return Err(Error::Domain(format!("fixed-number parameter must be a nonnegative integer, got {param}")).into()),
            3 => Strategy::RandomClustering { mean_cluster_size: param },
            s => return Err(Error::Domain(format!("unknown strategy {s}")).into()),
        };
        let e = estimate_ps(config_ref(cfg)?, strategy)?;
        write_out(out, UcinEstimate { p_hat: e.p_hat, std_err: e.std_err, n: e.n, successes: e.successes }, "out")
    })
}

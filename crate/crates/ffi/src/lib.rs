//! C ABI around the solver: opaque handles, integer status codes, and a
//! thread-local last-error message.
//!
//! Ownership: `qrvm_config_parse` and `qrvm_sim_new` allocate handles that
//! the caller releases with the matching `_free`. Strings returned by
//! `qrvm_version`, `qrvm_last_error` and `qrvm_config_scheme` are borrowed
//! and must not be freed; the last-error pointer stays valid until the next
//! failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qrvm::config::{parse_config, SimConfig};
use qrvm::error::QrvmError;
use qrvm::grid::build_grid;
use qrvm::integrators::Simulation;
use qrvm::run::{run, RunOutcome};
use qrvm::DiagnosticsRecord;

/// Status codes returned by every fallible entry point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrvmStatus {
    Ok = 0,
    NullPointer = 1,
    ConfigError = 2,
    BlowUp = 3,
    IoError = 4,
    InvalidArgument = 5,
    InternalError = 6,
}

/// Opaque parsed configuration.
pub struct QrvmConfig {
    inner: SimConfig,
}

/// Opaque simulation handle.
pub struct QrvmSim {
    sim: Simulation,
    base: DiagnosticsRecord,
}

/// Mesh summary of a simulation handle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrvmGridInfo {
    pub n_x: u64,
    pub n_p: u64,
    pub p_max: f64,
    pub dx: f64,
    pub dp: f64,
}

/// Diagnostics of the current state; `rel_*` are relative to the t = 0
/// record of the same handle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QrvmDiagnostics {
    pub t: f64,
    pub mass: f64,
    pub l2: f64,
    pub wtk: f64,
    pub wtp: f64,
    pub wlk: f64,
    pub wlp: f64,
    pub w_total: f64,
    pub rel_mass: f64,
    pub rel_l2: f64,
    pub rel_energy: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &QrvmError) -> QrvmStatus {
    match err {
        QrvmError::Config { .. } | QrvmError::InvalidParams(_) | QrvmError::InvalidGrid(_) => {
            QrvmStatus::ConfigError
        }
        QrvmError::Io { .. } => QrvmStatus::IoError,
        QrvmError::BlowUp { .. } | QrvmError::NonFinite { .. } => QrvmStatus::BlowUp,
        QrvmError::InvalidTimeStep { .. } | QrvmError::SchemeMismatch(_) => {
            QrvmStatus::InvalidArgument
        }
        QrvmError::SnapshotFormat(_) => QrvmStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> QrvmStatus) -> QrvmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            QrvmStatus::InternalError
        }
    }
}

/// Version string of the library, NUL-terminated, statically allocated.
#[no_mangle]
pub extern "C" fn qrvm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread (empty when none).
#[no_mangle]
pub extern "C" fn qrvm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses configuration text into a handle written to `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrvm_config_parse(
    text: *const c_char,
    out: *mut *mut QrvmConfig,
) -> QrvmStatus {
    if text.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config text is not valid UTF-8");
            return QrvmStatus::InvalidArgument;
        }
    };
    guarded(|| match parse_config(text) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(QrvmConfig { inner: cfg }));
            QrvmStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    })
}

/// Releases a configuration handle (NULL is a no-op).
///
/// # Safety
/// `cfg` must come from `qrvm_config_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qrvm_config_free(cfg: *mut QrvmConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Scheme name of a parsed configuration (borrowed, static).
///
/// # Safety
/// `cfg` must be a live handle from `qrvm_config_parse`.
#[no_mangle]
pub unsafe extern "C" fn qrvm_config_scheme(cfg: *const QrvmConfig) -> *const c_char {
    if cfg.is_null() {
        return std::ptr::null();
    }
    let name = (*cfg).inner.scheme.name();
    // scheme names are static and NUL-free
    match name {
        "rk-fdweno-rk" => "rk-fdweno-rk\0".as_ptr() as *const c_char,
        "rk-fdweno-lf" => "rk-fdweno-lf\0".as_ptr() as *const c_char,
        "ts-dslweno-lf" => "ts-dslweno-lf\0".as_ptr() as *const c_char,
        _ => "ts-cslweno-lf\0".as_ptr() as *const c_char,
    }
}

/// Builds an initialized simulation from a parsed configuration.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_new(
    cfg: *const QrvmConfig,
    out: *mut *mut QrvmSim,
) -> QrvmStatus {
    if cfg.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let cfg = &(*cfg).inner;
    guarded(|| {
        let grid = match build_grid(cfg.n_x, cfg.n_p, cfg.params.p_max, 3) {
            Ok(g) => g,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        match Simulation::new(grid, cfg.params, cfg.scheme, cfg.cfl(), cfg.fixed_dt()) {
            Ok(sim) => {
                let base = sim.diagnostics_record();
                *out = Box::into_raw(Box::new(QrvmSim { sim, base }));
                QrvmStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Releases a simulation handle (NULL is a no-op).
///
/// # Safety
/// `sim` must come from `qrvm_sim_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_free(sim: *mut QrvmSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances one time step; writes the dt taken to `dt_out` when non-NULL.
/// Returns `BlowUp` once max |f| exceeds the blow-up threshold or turns
/// non-finite.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_step(sim: *mut QrvmSim, dt_out: *mut f64) -> QrvmStatus {
    if sim.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let handle = &mut *sim;
    guarded(|| match handle.sim.step_auto(0.0) {
        Ok(dt) => {
            if !dt_out.is_null() {
                *dt_out = dt;
            }
            let max_abs = handle.sim.state.f.max_abs();
            if !max_abs.is_finite() || max_abs > qrvm::run::BLOWUP_THRESHOLD {
                set_error(&format!(
                    "blow-up at t = {} (max |f| = {max_abs:.3e})",
                    handle.sim.state.t
                ));
                return QrvmStatus::BlowUp;
            }
            QrvmStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    })
}

/// Current simulation time.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_time(sim: *const QrvmSim) -> f64 {
    if sim.is_null() {
        return f64::NAN;
    }
    (*sim).sim.state.t
}

/// Number of completed steps.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_step_count(sim: *const QrvmSim) -> u64 {
    if sim.is_null() {
        return 0;
    }
    (*sim).sim.state.step
}

/// Mesh summary.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_grid(sim: *const QrvmSim, out: *mut QrvmGridInfo) -> QrvmStatus {
    if sim.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let g = (*sim).sim.grid;
    *out = QrvmGridInfo {
        n_x: g.n_x as u64,
        n_p: g.n_p as u64,
        p_max: g.p_max,
        dx: g.dx,
        dp: g.dp,
    };
    QrvmStatus::Ok
}

/// Diagnostics of the current state, relative fields against t = 0.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_diagnostics(
    sim: *const QrvmSim,
    out: *mut QrvmDiagnostics,
) -> QrvmStatus {
    if sim.is_null() || out.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let handle = &*sim;
    guarded(|| {
        let r = handle.sim.diagnostics_record().with_reference(&handle.base);
        *out = QrvmDiagnostics {
            t: r.t,
            mass: r.mass,
            l2: r.l2,
            wtk: r.wtk,
            wtp: r.wtp,
            wlk: r.wlk,
            wlp: r.wlp,
            w_total: r.w_total,
            rel_mass: r.rel_mass,
            rel_l2: r.rel_l2,
            rel_energy: r.rel_energy,
        };
        QrvmStatus::Ok
    })
}

/// Copies f over the physical cells into `buf`, row-major in x then p
/// (index = i * n_p + j), the same layout as the snapshot payload.
/// `len` must equal n_x * n_p.
///
/// # Safety
/// `sim` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qrvm_sim_distribution(
    sim: *const QrvmSim,
    buf: *mut f64,
    len: u64,
) -> QrvmStatus {
    if sim.is_null() || buf.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let handle = &*sim;
    let g = handle.sim.grid;
    if len as usize != g.n_x * g.n_p {
        set_error(&format!(
            "buffer length {len} does not match n_x * n_p = {}",
            g.n_x * g.n_p
        ));
        return QrvmStatus::InvalidArgument;
    }
    let out = std::slice::from_raw_parts_mut(buf, len as usize);
    for i in 0..g.n_x {
        for j in 0..g.n_p {
            out[i * g.n_p + j] = handle.sim.state.f.get(i as isize, j as isize);
        }
    }
    QrvmStatus::Ok
}

/// Runs a configuration to completion, writing diagnostics and snapshots
/// to its output directory (the same behavior as the CLI).
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrvm_run(cfg: *const QrvmConfig) -> QrvmStatus {
    if cfg.is_null() {
        set_error("null pointer argument");
        return QrvmStatus::NullPointer;
    }
    let cfg = &(*cfg).inner;
    guarded(|| match run(cfg) {
        Ok(report) => match report.outcome {
            RunOutcome::Completed => QrvmStatus::Ok,
            RunOutcome::BlowUp { t, max_abs } => {
                set_error(&format!("blow-up at t = {t} (max |f| = {max_abs:.3e})"));
                QrvmStatus::BlowUp
            }
        },
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    })
}

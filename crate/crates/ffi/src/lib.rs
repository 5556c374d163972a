//! C ABI over `loopcocycle`.
//!
//! Every function returns an [`LcStatus`]; on failure the message is kept
//! per thread and read with [`lc_last_error`]. Strings handed out by the
//! library are released with [`lc_string_free`], handles with
//! [`lc_multiloop_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use loopcocycle::cli::{run, Command, RunConfig, RunOptions};
use loopcocycle::cocycle::omega_alg;
use loopcocycle::cohomology::{ce_h2_weight, cutoff_stability, target_dim};
use loopcocycle::eqmap::{EqMapElement, MultiloopAlgebra};
use loopcocycle::exactnum::Scalar;
use loopcocycle::laurent::Multidegree;
use loopcocycle::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    InvalidAlgebra = 4,
    InvalidArgument = 5,
    Computation = 6,
    Unstable = 7,
    ChecksFailed = 8,
    Panic = 9,
}

/// Result of comparing `dim H²` with the invariant target at one weight.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LcTargetVerdict {
    pub h2_dim: usize,
    /// `dim H²` at cutoff `D + 1`.
    pub h2_dim_next: usize,
    pub target_dim: usize,
    pub stable: bool,
    pub matches: bool,
}

/// Opaque handle to a multiloop algebra built from a JSON run configuration.
pub struct LcMultiloop {
    algebra: Arc<MultiloopAlgebra>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> LcStatus {
    match err {
        Error::Config { .. } | Error::Io(_) | Error::UnknownPreset(_) => LcStatus::Config,
        Error::AntisymmetryViolation { .. }
        | Error::JacobiViolation { .. }
        | Error::NotAutomorphism { .. }
        | Error::OrderMismatch(_)
        | Error::NonCommuting(..)
        | Error::GradingViolation(_) => LcStatus::InvalidAlgebra,
        Error::DimensionMismatch(_) | Error::DegreeCapExceeded { .. } | Error::WindowEmpty { .. } => {
            LcStatus::InvalidArgument
        }
        Error::Unstable { .. } => LcStatus::Unstable,
        _ => LcStatus::Computation,
    }
}

/// Run `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<LcStatus, (LcStatus, String)>) -> LcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside loopcocycle".into());
            LcStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (LcStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (LcStatus, String)> {
    if p.is_null() {
        return Err((LcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (LcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_weight(p: *const i64, n: usize) -> Result<Multidegree, (LcStatus, String)> {
    if p.is_null() && n > 0 {
        return Err((LcStatus::NullPointer, "weight is null".into()));
    }
    let slice = if n == 0 { &[][..] } else { std::slice::from_raw_parts(p, n) };
    Ok(Multidegree(slice.to_vec()))
}

fn check_n(m: &MultiloopAlgebra, w: &Multidegree) -> Result<(), (LcStatus, String)> {
    if w.n() != m.n() {
        return Err((LcStatus::InvalidArgument, format!("weight {w} has {} entries, expected {}", w.n(), m.n())));
    }
    Ok(())
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (LcStatus, String)> {
    let c = CString::new(s).map_err(|_| (LcStatus::Computation, "output contains nul".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Build a multiloop algebra from a JSON run configuration.
///
/// # Safety
/// `config_json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lc_multiloop_new(config_json: *const c_char, out: *mut *mut LcMultiloop) -> LcStatus {
    guard(|| {
        if out.is_null() {
            return Err((LcStatus::NullPointer, "out is null".into()));
        }
        let text = read_str(config_json, "config_json")?;
        let cfg = RunConfig::from_json_str(text).map_err(lib_err)?;
        let algebra = cfg.build_multiloop().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(LcMultiloop { algebra }));
        Ok(LcStatus::Ok)
    })
}

/// # Safety
/// `handle` must come from [`lc_multiloop_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lc_multiloop_free(handle: *mut LcMultiloop) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of torus variables `n`.
///
/// # Safety
/// `handle` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lc_multiloop_nvars(handle: *const LcMultiloop, out: *mut usize) -> LcStatus {
    guard(|| {
        let h = handle_of(handle)?;
        write_out(out, h.algebra.n())
    })
}

unsafe fn handle_of<'a>(h: *const LcMultiloop) -> Result<&'a LcMultiloop, (LcStatus, String)> {
    h.as_ref().ok_or((LcStatus::NullPointer, "handle is null".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<LcStatus, (LcStatus, String)> {
    if out.is_null() {
        return Err((LcStatus::NullPointer, "out is null".into()));
    }
    *out = v;
    Ok(LcStatus::Ok)
}

/// Dimension of the degree-`a` component `t^a ⊗ g_{\bar a}`.
///
/// # Safety
/// `weight` must point to `n` values; `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_graded_dim(
    handle: *const LcMultiloop,
    weight: *const i64,
    n: usize,
    out: *mut usize,
) -> LcStatus {
    guard(|| {
        let h = handle_of(handle)?;
        let w = read_weight(weight, n)?;
        check_n(&h.algebra, &w)?;
        write_out(out, h.algebra.slice_dim(&w))
    })
}

/// `dim H²` of the windowed complex at weight `w` and cutoff `D`.
///
/// # Safety
/// `weight` must point to `n` values; `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_h2_dim(
    handle: *const LcMultiloop,
    weight: *const i64,
    n: usize,
    cutoff: u32,
    out: *mut usize,
) -> LcStatus {
    guard(|| {
        let h = handle_of(handle)?;
        let w = read_weight(weight, n)?;
        check_n(&h.algebra, &w)?;
        let r = ce_h2_weight(&h.algebra, &w, cutoff).map_err(lib_err)?;
        write_out(out, r.dim_h2)
    })
}

/// Compare `dim H²` with the invariant target. Unstable weights still fill
/// `out` (with `stable = false`) and return [`LcStatus::Unstable`].
///
/// # Safety
/// `weight` must point to `n` values; `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_compare_to_target(
    handle: *const LcMultiloop,
    weight: *const i64,
    n: usize,
    cutoff: u32,
    out: *mut LcTargetVerdict,
) -> LcStatus {
    guard(|| {
        let h = handle_of(handle)?;
        let w = read_weight(weight, n)?;
        check_n(&h.algebra, &w)?;
        let s = cutoff_stability(&h.algebra, &w, cutoff).map_err(lib_err)?;
        let target = target_dim(&h.algebra, &w);
        let verdict = LcTargetVerdict {
            h2_dim: s.dim_low,
            h2_dim_next: s.dim_high,
            target_dim: target,
            stable: s.stable,
            matches: s.stable && s.dim_low == target,
        };
        write_out(out, verdict)?;
        if s.stable {
            Ok(LcStatus::Ok)
        } else {
            set_error(format!("H^2 at {w} changes from {} to {} between cutoffs", s.dim_low, s.dim_high));
            Ok(LcStatus::Unstable)
        }
    })
}

/// `ω(t^a ⊗ x_i, t^b ⊗ y_j)` rendered as text, where `x_i` and `y_j` are
/// the `i`-th and `j`-th basis vectors of the graded pieces at `a` and `b`.
/// Free the result with [`lc_string_free`].
///
/// # Safety
/// `a` and `b` must point to `n` values; `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lc_omega_string(
    handle: *const LcMultiloop,
    a: *const i64,
    i: usize,
    b: *const i64,
    j: usize,
    n: usize,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        if out.is_null() {
            return Err((LcStatus::NullPointer, "out is null".into()));
        }
        let h = handle_of(handle)?;
        let (a, b) = (read_weight(a, n)?, read_weight(b, n)?);
        check_n(&h.algebra, &a)?;
        let unit = |deg: &Multidegree, idx: usize| -> Result<EqMapElement, (LcStatus, String)> {
            let dim = h.algebra.slice_dim(deg);
            if idx >= dim {
                return Err((LcStatus::InvalidArgument, format!("index {idx} out of range for degree {deg} (dim {dim})")));
            }
            let field = h.algebra.field();
            let coords = (0..dim).map(|k| if k == idx { Scalar::one(field) } else { Scalar::zero(field) }).collect();
            EqMapElement::term(&h.algebra, deg.clone(), coords).map_err(lib_err)
        };
        let value = omega_alg(&unit(&a, i)?, &unit(&b, j)?).map_err(lib_err)?;
        out_string(value.to_string(), out)?;
        Ok(LcStatus::Ok)
    })
}

/// Run a command (`construct`, `verify`, `h2-scan`, `density-demo`) and
/// return its JSON report. A report whose checks fail is still returned,
/// with [`LcStatus::ChecksFailed`]. `jobs = 0` uses the default pool.
///
/// # Safety
/// `command` and `config_json` must be nul-terminated strings; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lc_run_command(
    command: *const c_char,
    config_json: *const c_char,
    seed: u64,
    jobs: u32,
    out: *mut *mut c_char,
) -> LcStatus {
    guard(|| {
        if out.is_null() {
            return Err((LcStatus::NullPointer, "out is null".into()));
        }
        let cmd: Command = read_str(command, "command")?.parse().map_err(lib_err)?;
        let cfg = RunConfig::from_json_str(read_str(config_json, "config_json")?).map_err(lib_err)?;
        let opts = RunOptions { jobs: (jobs > 0).then_some(jobs as usize), seed };
        let report = run(cmd, &cfg, &opts).map_err(lib_err)?;
        out_string(report.to_json(), out)?;
        if report.passed {
            Ok(LcStatus::Ok)
        } else {
            set_error(format!("{}: {}", report.command, report.verdict));
            Ok(LcStatus::ChecksFailed)
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

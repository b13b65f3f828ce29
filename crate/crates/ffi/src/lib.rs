//! C ABI for the modeport simulator.
//!
//! Every fallible call returns a [`ModeportStatus`]; on failure the message is
//! kept per thread and can be copied out with [`modeport_last_error`].
//! Teleportation results are returned behind an opaque handle that the caller
//! releases with [`modeport_teleport_free`]. Strings returned by the library
//! are released with [`modeport_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modeport::hamiltonian::{hardcore_limit_scan, reservoir_resolved_rotation, ScanPoint};
use modeport::protocol::{
    dense_coding_outcomes, run_dense_coding, run_teleportation, Classification, ReservoirConfig,
    TeleportationResult, UnknownStateSpec,
};
use modeport::report::{to_json, TeleportReport};
use modeport::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeportStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GridTooCoarse = 3,
    PhaseMatching = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeportClassification {
    PsiPlus = 0,
    PsiMinus = 1,
    Failure = 2,
}

/// One row of a teleportation result. Fidelities are NaN on failure outcomes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeportOutcome {
    pub n_a: u32,
    pub n_alice: u32,
    pub classification: ModeportClassification,
    pub probability: f64,
    pub fidelity_min: f64,
    pub fidelity_mean: f64,
}

/// Opaque teleportation result.
pub struct ModeportTeleport {
    inner: TeleportationResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: ModeportStatus, msg: impl Into<String>) -> ModeportStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> ModeportStatus {
    match e {
        Error::GridTooCoarse { .. } => ModeportStatus::GridTooCoarse,
        Error::PhaseMatching(_) => ModeportStatus::PhaseMatching,
        _ => ModeportStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), ModeportStatus>) -> ModeportStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModeportStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(ModeportStatus::Internal, "internal panic"),
    }
}

fn lib<T>(r: modeport::Result<T>) -> Result<T, ModeportStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn config(shared: bool) -> ReservoirConfig {
    if shared {
        ReservoirConfig::Shared
    } else {
        ReservoirConfig::Distinct
    }
}

/// Copy the calling thread's last error message, nul-terminated and
/// truncated to `len` bytes, into `buf`. Returns the full message length
/// without the terminator, or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn modeport_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn modeport_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Run the teleportation circuit for the input `cos(theta') |0> - i sin(theta')
/// e^{i(theta + phi)} |1>` on `grid_points` phases per reservoir. On success
/// `*out` owns a new handle.
///
/// # Safety
/// `out` must be null or a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_run(
    theta_prime: f64,
    phi: f64,
    grid_points: usize,
    shared_reservoir: bool,
    out: *mut *mut ModeportTeleport,
) -> ModeportStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(ModeportStatus::NullPointer, "out is null"));
        }
        let spec = UnknownStateSpec { theta_prime, phi };
        let inner = lib(run_teleportation(
            &spec,
            config(shared_reservoir),
            grid_points,
        ))?;
        *out = Box::into_raw(Box::new(ModeportTeleport { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle from [`modeport_teleport_run`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_free(handle: *mut ModeportTeleport) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Phase-averaged probability of a successful read-out, or NaN for a null
/// handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_success_probability(
    handle: *const ModeportTeleport,
) -> f64 {
    handle
        .as_ref()
        .map_or(f64::NAN, |h| h.inner.success_probability)
}

/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_ssr_compliant(handle: *const ModeportTeleport) -> bool {
    handle.as_ref().is_some_and(|h| h.inner.ssr_compliant)
}

/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_outcome_count(handle: *const ModeportTeleport) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.outcomes.len())
}

/// # Safety
/// `handle` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_outcome(
    handle: *const ModeportTeleport,
    index: usize,
    out: *mut ModeportOutcome,
) -> ModeportStatus {
    guarded(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            return Err(fail(ModeportStatus::NullPointer, "handle or out is null"));
        };
        let o = h.inner.outcomes.get(index).ok_or_else(|| {
            fail(
                ModeportStatus::InvalidArgument,
                format!("outcome index {index} out of range"),
            )
        })?;
        let (classification, success) = match o.outcome.classification {
            Classification::PsiPlus => (ModeportClassification::PsiPlus, true),
            Classification::PsiMinus => (ModeportClassification::PsiMinus, true),
            Classification::Failure => (ModeportClassification::Failure, false),
        };
        *out = ModeportOutcome {
            n_a: o.outcome.n_a as u32,
            n_alice: o.outcome.n_alice as u32,
            classification,
            probability: o.probability,
            fidelity_min: if success { o.fidelity_min() } else { f64::NAN },
            fidelity_mean: if success { o.fidelity_mean() } else { f64::NAN },
        };
        Ok(())
    })
}

/// The JSON report for a result, as a new string to release with
/// [`modeport_string_free`]. Null on a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn modeport_teleport_to_json(handle: *const ModeportTeleport) -> *mut c_char {
    handle.as_ref().map_or(ptr::null_mut(), |h| {
        CString::new(to_json(&TeleportReport::new(&h.inner)))
            .map_or(ptr::null_mut(), CString::into_raw)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modeport_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn scan(
    input: *const f64,
    len: usize,
    out: *mut f64,
    f: fn(&[f64]) -> modeport::Result<Vec<ScanPoint>>,
) -> ModeportStatus {
    guarded(|| {
        if input.is_null() || out.is_null() {
            return Err(fail(ModeportStatus::NullPointer, "input or out is null"));
        }
        let values = std::slice::from_raw_parts(input, len);
        let pts = lib(f(values))?;
        for (i, p) in pts.iter().enumerate() {
            *out.add(i) = p.value;
        }
        Ok(())
    })
}

/// Swap infidelity of Bose-Hubbard hopping at each of the `len` ascending,
/// positive U/J ratios, written to `out`.
///
/// # Safety
/// `ratios` must point to `len` readable values and `out` to `len` writable ones.
#[no_mangle]
pub unsafe extern "C" fn modeport_hardcore_scan(
    ratios: *const f64,
    len: usize,
    out: *mut f64,
) -> ModeportStatus {
    scan(ratios, len, out, hardcore_limit_scan)
}

/// Deviation of the resolved-reservoir rotation from the ideal gate at each of
/// the `len` ascending mean occupations, written to `out`.
///
/// # Safety
/// `nbars` must point to `len` readable values and `out` to `len` writable ones.
#[no_mangle]
pub unsafe extern "C" fn modeport_reservoir_scan(
    nbars: *const f64,
    len: usize,
    out: *mut f64,
) -> ModeportStatus {
    scan(nbars, len, out, reservoir_resolved_rotation)
}

/// Send `message` (0 to 3) through the dense-coding circuit. Distinct
/// reservoirs are refused with `PHASE_MATCHING` unless `diagnostic` is set, in
/// which case the most likely decoding is still reported.
///
/// # Safety
/// `decoded` and `deterministic` must each be null or writable.
#[no_mangle]
pub unsafe extern "C" fn modeport_dense_coding(
    message: u8,
    shared_reservoir: bool,
    grid_points: usize,
    diagnostic: bool,
    decoded: *mut u8,
    deterministic: *mut bool,
) -> ModeportStatus {
    guarded(|| {
        if decoded.is_null() || deterministic.is_null() {
            return Err(fail(
                ModeportStatus::NullPointer,
                "decoded or deterministic is null",
            ));
        }
        let cfg = config(shared_reservoir);
        let r = lib(if diagnostic {
            dense_coding_outcomes(message, cfg, grid_points)
        } else {
            run_dense_coding(message, cfg, grid_points)
        })?;
        *decoded = r.decoded;
        *deterministic = r.deterministic;
        Ok(())
    })
}

/// Run the built-in acceptance checks. `*passed` receives the number of
/// passing criteria and `*total` the number run.
///
/// # Safety
/// `passed` and `total` must each be null or writable.
#[no_mangle]
pub unsafe extern "C" fn modeport_selftest(passed: *mut u32, total: *mut u32) -> ModeportStatus {
    guarded(|| {
        if passed.is_null() || total.is_null() {
            return Err(fail(ModeportStatus::NullPointer, "passed or total is null"));
        }
        let c = lib(modeport::selftest::run_selftest())?;
        *passed = c.iter().filter(|c| c.passed).count() as u32;
        *total = c.len() as u32;
        Ok(())
    })
}

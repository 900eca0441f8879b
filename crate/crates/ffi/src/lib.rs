//! C ABI over `maxmean`.
//!
//! Series and step functions live behind opaque handles created by
//! `mm_*_new` (or a generator) and released with the matching `mm_*_free`.
//! Every fallible call returns an [`MmStatus`] and writes its result through
//! an out-pointer; on failure `mm_last_error` describes the cause for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use maxmean::{BoundCheck, Error, SampleSeries, StepFunction, WindowSpec};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Rejected input: bad window, exponent, length, or non-finite data.
    InvalidArgument = 2,
    /// The scales do not admit a counterexample (e.g. the larger one is a
    /// multiple of the smaller).
    NotACounterexample = 3,
    /// Internal error; the library panicked.
    Internal = 4,
}

/// Opaque sample series.
pub struct MmSeries(SampleSeries);

/// Opaque step function.
pub struct MmStepFunction(StepFunction);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MmWindowedNorm {
    pub value: f64,
    pub value_pow_p: f64,
    /// First sample of the smallest maximizing window.
    pub arg_start: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MmIntervalNorm {
    pub value: f64,
    pub value_pow_p: f64,
    /// Left end of the smallest maximizing interval.
    pub arg_left: f64,
}

/// Outcome of an inequality check `lhs <= rhs` (or `<`).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MmCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Scale factor on the right-hand side; NaN when not applicable.
    pub factor: f64,
    pub passed: bool,
}

impl From<&BoundCheck> for MmCheck {
    fn from(c: &BoundCheck) -> Self {
        Self {
            lhs: c.lhs,
            rhs: c.rhs,
            slack: c.slack,
            factor: c.factor.unwrap_or(f64::NAN),
            passed: c.passed,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> MmStatus {
    match err {
        Error::NotACounterexampleCase { .. } => MmStatus::NotACounterexample,
        _ => MmStatus::InvalidArgument,
    }
}

enum Failure {
    Null,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            MmStatus::Ok
        }
        Ok(Err(Failure::Null)) => {
            set_last_error("null pointer argument");
            MmStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            MmStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null);
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(data: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(Failure::Null);
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `len` samples spaced `dt` apart into a new series.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_series_new(values: *const f64, len: usize, dt: f64, out: *mut *mut MmSeries) -> MmStatus {
    guard(|| {
        let x = SampleSeries::new(slice(values, len)?.to_vec(), dt)?;
        write(out, Box::into_raw(Box::new(MmSeries(x))))
    })
}

/// # Safety
/// `series` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn mm_series_free(series: *mut MmSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of samples; 0 for null.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_series_len(series: *const MmSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// Ones at indices `0, n, 2n, ...`, zeros elsewhere, `len` samples.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_impulse_train(n: usize, len: usize, out: *mut *mut MmSeries) -> MmStatus {
    guard(|| {
        let x = maxmean::impulse_train(n, len)?;
        write(out, Box::into_raw(Box::new(MmSeries(x))))
    })
}

/// Maximal p-mean over windows of `n` samples.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_windowed_pnorm(
    series: *const MmSeries,
    p: f64,
    n: usize,
    out: *mut MmWindowedNorm,
) -> MmStatus {
    guard(|| {
        let r = maxmean::windowed_pnorm(&deref(series)?.0, WindowSpec::new(p, n)?)?;
        write(
            out,
            MmWindowedNorm {
                value: r.value,
                value_pow_p: r.value_pow_p,
                arg_start: r.arg_start,
            },
        )
    })
}

/// Largest absolute sample.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_sup_norm(series: *const MmSeries, out: *mut f64) -> MmStatus {
    guard(|| write(out, maxmean::sup_norm(&deref(series)?.0)))
}

/// `‖x‖^p` at window `m` against `(⌊m/n⌋+1)·n/m` times the value at `n`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_check_two_scale_bound(
    series: *const MmSeries,
    p: f64,
    n: usize,
    m: usize,
    out: *mut MmCheck,
) -> MmStatus {
    guard(|| {
        let c = maxmean::discrete::check_two_scale_bound(&deref(series)?.0, p, n, m)?;
        write(out, MmCheck::from(&c))
    })
}

/// `‖x‖` at window `d·n` against the value at `n`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_check_multiple_ordering(
    series: *const MmSeries,
    p: f64,
    n: usize,
    d: usize,
    out: *mut MmCheck,
) -> MmStatus {
    guard(|| {
        let c = maxmean::discrete::check_multiple_ordering(&deref(series)?.0, p, n, d)?;
        write(out, MmCheck::from(&c))
    })
}

/// Step function with `breakpoint_count` strictly increasing breakpoints and
/// `breakpoint_count - 1` piece values; zero outside.
///
/// # Safety
/// `breakpoints` and `values` must point to that many readable doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_step_new(
    breakpoints: *const f64,
    breakpoint_count: usize,
    values: *const f64,
    value_count: usize,
    out: *mut *mut MmStepFunction,
) -> MmStatus {
    guard(|| {
        let f = StepFunction::new(
            slice(breakpoints, breakpoint_count)?.to_vec(),
            slice(values, value_count)?.to_vec(),
        )?;
        write(out, Box::into_raw(Box::new(MmStepFunction(f))))
    })
}

/// # Safety
/// `step` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn mm_step_free(step: *mut MmStepFunction) {
    if !step.is_null() {
        drop(Box::from_raw(step));
    }
}

/// Number of pieces after merging equal neighbours; 0 for null.
///
/// # Safety
/// `step` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_step_pieces(step: *const MmStepFunction) -> usize {
    step.as_ref().map_or(0, |f| f.0.pieces())
}

/// Maximal p-mean over intervals of length `length`.
///
/// # Safety
/// `step` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_interval_pnorm(
    step: *const MmStepFunction,
    p: f64,
    length: f64,
    out: *mut MmIntervalNorm,
) -> MmStatus {
    guard(|| {
        let r = maxmean::interval_pnorm(&deref(step)?.0, p, length)?;
        write(
            out,
            MmIntervalNorm {
                value: r.value,
                value_pow_p: r.value_pow_p,
                arg_left: r.arg_left,
            },
        )
    })
}

/// Rectangle of unit `L^p` mass on `(0, epsilon)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_single_bump(epsilon: f64, p: f64, out: *mut *mut MmStepFunction) -> MmStatus {
    guard(|| {
        let f = maxmean::single_bump(epsilon, p)?;
        write(out, Box::into_raw(Box::new(MmStepFunction(f))))
    })
}

/// `⌊S/T⌋ + 1` unit-mass bumps whose maximal mean at length `long` exceeds
/// the one at `short`. `out_d` (optional) receives `⌊S/T⌋`.
///
/// # Safety
/// `out` must be writable; `out_d` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mm_bump_train(
    short: f64,
    long: f64,
    p: f64,
    out: *mut *mut MmStepFunction,
    out_d: *mut u64,
) -> MmStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null);
        }
        let train = maxmean::bump_train(short, long, p)?;
        if !out_d.is_null() {
            out_d.write(train.d);
        }
        write(out, Box::into_raw(Box::new(MmStepFunction(train.f))))
    })
}

/// Continuous two-scale bound between lengths `short < long`.
///
/// # Safety
/// `step` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_check_two_scale_bound_cont(
    step: *const MmStepFunction,
    p: f64,
    short: f64,
    long: f64,
    out: *mut MmCheck,
) -> MmStatus {
    guard(|| {
        let c = maxmean::continuous::check_two_scale_bound_cont(&deref(step)?.0, p, short, long)?;
        write(out, MmCheck::from(&c))
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn mm_status_str(status: MmStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MmStatus::Ok => b"ok\0",
        MmStatus::NullPointer => b"null pointer\0",
        MmStatus::InvalidArgument => b"invalid argument\0",
        MmStatus::NotACounterexample => b"not a counterexample case\0",
        MmStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

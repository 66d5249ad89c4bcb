//! C ABI for `qangle`.
//!
//! States and generators are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`QaStatus`]; on failure the
//! message is available from [`qa_last_error_message`] on the same thread.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use nalgebra::DMatrix;
use qangle::dynamics::{
    certainty_verdict, evolve, minimal_substantial_shift, orbit_stats, EvolutionContext,
    HermitianGenerator,
};
use qangle::hilbert::{
    differ_substantially, quantum_angle, random_state, CVector, StateVector, C64,
};
use qangle::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    InvalidArgument = 3,
    NotNormalized = 4,
    NotHermitian = 5,
    Numerical = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaOrbitStats {
    pub mean: f64,
    pub std_dev: f64,
    pub omega: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// The premise was false, so the bound holds trivially.
    pub vacuous: bool,
}

/// A normalized state vector.
pub struct QaState(StateVector);

/// A Hermitian generator with its spectrum.
pub struct QaGenerator(HermitianGenerator);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn status_of(err: &Error) -> QaStatus {
    match err {
        Error::DimensionMismatch { .. } => QaStatus::DimensionMismatch,
        Error::NotNormalized { .. } | Error::ZeroState => QaStatus::NotNormalized,
        Error::NotHermitian { .. } => QaStatus::NotHermitian,
        Error::Decomposition { .. } | Error::NumericalGuard(_) | Error::NonFinite => {
            QaStatus::Numerical
        }
        _ => QaStatus::InvalidArgument,
    }
}

struct Failure(QaStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and converts it to a status.
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> QaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QaStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside qangle");
            QaStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn input_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn context(generator: &QaGenerator, hbar: f64) -> Result<EvolutionContext, Failure> {
    Ok(EvolutionContext::new(generator.0.clone(), hbar)?)
}

/// The message for the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qa_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a state from `len` amplitudes, normalizing any non-zero vector.
///
/// # Safety
/// `amplitudes` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_state_new(
    amplitudes: *const QaComplex,
    len: usize,
    out: *mut *mut QaState,
) -> QaStatus {
    guarded(|| {
        let values = input_slice(amplitudes, len, "amplitudes")?;
        let raw = CVector::from_iterator(len, values.iter().map(|z| C64::new(z.re, z.im)));
        let state = StateVector::normalize(raw)?;
        write(out, Box::into_raw(Box::new(QaState(state))), "out")
    })
}

/// A seeded random state of dimension `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_state_random(
    dim: usize,
    seed: u64,
    out: *mut *mut QaState,
) -> QaStatus {
    guarded(|| {
        let state = random_state(dim, seed)?;
        write(out, Box::into_raw(Box::new(QaState(state))), "out")
    })
}

/// Dimension of `state`, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qa_state_dim(state: *const QaState) -> usize {
    state.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the amplitudes into `out`, which must hold exactly `len` values.
///
/// # Safety
/// `state` must be a live handle and `out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn qa_state_amplitudes(
    state: *const QaState,
    out: *mut QaComplex,
    len: usize,
) -> QaStatus {
    guarded(|| {
        let state = borrow(state, "state")?;
        if len != state.0.dim() {
            return Err(Error::DimensionMismatch {
                left: state.0.dim(),
                right: len,
            }
            .into());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let dest = slice::from_raw_parts_mut(out, len);
        for (d, z) in dest.iter_mut().zip(state.0.as_slice()) {
            *d = QaComplex { re: z.re, im: z.im };
        }
        Ok(())
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qa_state_free(state: *mut QaState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `arccos |⟨a|b⟩|` in radians.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_quantum_angle(
    a: *const QaState,
    b: *const QaState,
    out: *mut f64,
) -> QaStatus {
    guarded(|| {
        let angle = quantum_angle(&borrow(a, "a")?.0, &borrow(b, "b")?.0)?;
        write(out, angle.radians(), "out")
    })
}

/// Whether the angle between `a` and `b` is at least one radian.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_differ_substantially(
    a: *const QaState,
    b: *const QaState,
    out: *mut bool,
) -> QaStatus {
    guarded(|| {
        let differ = differ_substantially(&borrow(a, "a")?.0, &borrow(b, "b")?.0)?;
        write(out, differ, "out")
    })
}

/// A generator from `dim × dim` row-major entries; rejected unless Hermitian.
///
/// # Safety
/// `entries` must point to `dim * dim` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_generator_new(
    entries: *const QaComplex,
    dim: usize,
    out: *mut *mut QaGenerator,
) -> QaStatus {
    guarded(|| {
        let count = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure(QaStatus::InvalidArgument, "dimension overflows".into()))?;
        let values = input_slice(entries, count, "entries")?;
        let data: Vec<C64> = values.iter().map(|z| C64::new(z.re, z.im)).collect();
        let generator = HermitianGenerator::new(DMatrix::from_row_slice(dim, dim, &data))?;
        write(out, Box::into_raw(Box::new(QaGenerator(generator))), "out")
    })
}

/// A diagonal generator with the given real eigenvalues.
///
/// # Safety
/// `values` must point to `dim` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_generator_diagonal(
    values: *const f64,
    dim: usize,
    out: *mut *mut QaGenerator,
) -> QaStatus {
    guarded(|| {
        let generator = HermitianGenerator::diagonal(input_slice(values, dim, "values")?)?;
        write(out, Box::into_raw(Box::new(QaGenerator(generator))), "out")
    })
}

/// Dimension of `generator`, or 0 for a null handle.
///
/// # Safety
/// `generator` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qa_generator_dim(generator: *const QaGenerator) -> usize {
    generator.as_ref().map_or(0, |g| g.0.dim())
}

/// Releases a generator. Null is ignored.
///
/// # Safety
/// `generator` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qa_generator_free(generator: *mut QaGenerator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

/// `e^{−iδs·A/ħ} ψ` as a new state handle.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_evolve(
    generator: *const QaGenerator,
    hbar: f64,
    state: *const QaState,
    deltas: f64,
    out: *mut *mut QaState,
) -> QaStatus {
    guarded(|| {
        let ctx = context(borrow(generator, "generator")?, hbar)?;
        let moved = evolve(&ctx, &borrow(state, "state")?.0, deltas)?;
        write(out, Box::into_raw(Box::new(QaState(moved))), "out")
    })
}

/// Mean, spread and angular speed of the orbit through `state`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_orbit_stats(
    generator: *const QaGenerator,
    hbar: f64,
    state: *const QaState,
    out: *mut QaOrbitStats,
) -> QaStatus {
    guarded(|| {
        let ctx = context(borrow(generator, "generator")?, hbar)?;
        let stats = orbit_stats(&ctx, &borrow(state, "state")?.0)?;
        write(
            out,
            QaOrbitStats {
                mean: stats.mean,
                std_dev: stats.std_dev,
                omega: stats.omega,
            },
            "out",
        )
    })
}

/// Checks `ħ ≤ |δs|·ΔA` when `U(δs)ψ` differs substantially from `ψ`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_certainty_verdict(
    generator: *const QaGenerator,
    hbar: f64,
    state: *const QaState,
    deltas: f64,
    out: *mut QaBoundReport,
) -> QaStatus {
    guarded(|| {
        let ctx = context(borrow(generator, "generator")?, hbar)?;
        let r = certainty_verdict(&ctx, &borrow(state, "state")?.0, deltas)?;
        write(
            out,
            QaBoundReport {
                lhs: r.lhs,
                rhs: r.rhs,
                slack: r.slack,
                tolerance: r.tolerance,
                holds: r.holds,
                vacuous: r.vacuous,
            },
            "out",
        )
    })
}

/// Smallest `δs ∈ (0, max_shift]` with a substantial change. `*found` is
/// false (and `*out` untouched) when there is none.
///
/// # Safety
/// Handles must be live; `out` and `found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qa_minimal_substantial_shift(
    generator: *const QaGenerator,
    hbar: f64,
    state: *const QaState,
    max_shift: f64,
    out: *mut f64,
    found: *mut bool,
) -> QaStatus {
    guarded(|| {
        if out.is_null() || found.is_null() {
            return Err(null("out"));
        }
        let ctx = context(borrow(generator, "generator")?, hbar)?;
        let shift = minimal_substantial_shift(&ctx, &borrow(state, "state")?.0, max_shift)?;
        found.write(shift.is_some());
        if let Some(s) = shift {
            out.write(s);
        }
        Ok(())
    })
}

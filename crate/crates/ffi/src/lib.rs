//! C ABI for `relq`.
//!
//! Models are opaque handles created by [`relq_model_new`] and released by
//! [`relq_model_free`]. Every fallible call returns a [`RelqStatus`]; the
//! message of the most recent failure on the calling thread is available
//! through [`relq_last_error`]. Matrices are written row-major into
//! caller-owned buffers whose length is passed explicitly.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use relq::cli::verify::verify_model;
use relq::hermite::hermite_roots;
use relq::hilbert::{build_model, ModelSpec};
use relq::limits::two_point;
use relq::phase_ops::Ladder;
use relq::spectral::RelationalBasis;
use relq::{Error, Operator};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidModel = 2,
    InvalidArgument = 3,
    IndexOutOfRange = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelqComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for RelqComplex {
    fn from(z: Complex64) -> Self {
        RelqComplex { re: z.re, im: z.im }
    }
}

/// `<+j| q1(t') q1(t) |+j>` and the two closed forms it is compared with.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelqTwoPoint {
    pub value: RelqComplex,
    pub derived: RelqComplex,
    pub reference: RelqComplex,
}

/// Opaque model handle.
pub struct RelqModel {
    spec: ModelSpec,
    ladder: Ladder,
    basis: RelationalBasis,
}

static VERSION: &CStr =
    match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(RelqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidModel(_) | Error::DimensionTooLarge { .. } => RelqStatus::InvalidModel,
            Error::IndexOutOfRange { .. } | Error::LabelOutOfRange { .. } => {
                RelqStatus::IndexOutOfRange
            }
            _ => RelqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RelqStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> RelqStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(RelqStatus::Internal, msg))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| e.borrow_mut().clear());
            RelqStatus::Ok
        }
        Err(Failure(status, msg)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = msg);
            status
        }
    }
}

unsafe fn model_ref<'a>(model: *const RelqModel) -> Result<&'a RelqModel, Failure> {
    model.as_ref().ok_or_else(|| null("model"))
}

unsafe fn output<'a, T>(
    buf: *mut T,
    len: usize,
    needed: usize,
    what: &str,
) -> Result<&'a mut [T], Failure> {
    if buf.is_null() {
        return Err(null(what));
    }
    if len < needed {
        return Err(Failure(
            RelqStatus::BufferTooSmall,
            format!("{what} holds {len} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed))
}

fn write_matrix(op: &Operator, out: &mut [RelqComplex]) {
    let n = op.dim();
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = op.0[(r, c)].into();
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn relq_version() -> *const c_char {
    VERSION.as_ptr()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the length the full message needs,
/// including the terminator. Passing a null `buf` only queries the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn relq_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Builds the model with constraint constant `m` (the Hilbert-space
/// dimension) and stores the handle in `*out`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn relq_model_new(m: i64, out: *mut *mut RelqModel) -> RelqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = build_model(m)?;
        let model = RelqModel {
            spec,
            ladder: Ladder::new(&spec),
            basis: RelationalBasis::new(&spec)?,
        };
        *out = Box::into_raw(Box::new(model));
        Ok(())
    })
}

/// Releases a handle from [`relq_model_new`]. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relq_model_free(model: *mut RelqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Hilbert-space dimension `N = M`, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn relq_model_dimension(model: *const RelqModel) -> usize {
    model.as_ref().map_or(0, |m| m.spec.dimension())
}

/// `j = (M - 1)/2`, or NaN for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn relq_model_j(model: *const RelqModel) -> f64 {
    model.as_ref().map_or(f64::NAN, |m| m.spec.j())
}

/// Zeros of `H_n` in increasing order and, if `weights` is not null, the
/// matching Gauss–Hermite weights normalized to sum to one.
///
/// # Safety
/// `roots` (and `weights` when not null) must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn relq_hermite_roots(
    n: usize,
    roots: *mut f64,
    weights: *mut f64,
    len: usize,
) -> RelqStatus {
    guard(|| {
        let set = hermite_roots(n)?;
        output(roots, len, n, "roots")?.copy_from_slice(&set.roots);
        if !weights.is_null() {
            output(weights, len, n, "weights")?.copy_from_slice(&set.weights);
        }
        Ok(())
    })
}

/// Row-major `N x N` matrix of `q1(t)` in the basis `m = -j, ..., +j`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn relq_q1_operator(
    model: *const RelqModel,
    t: f64,
    out: *mut RelqComplex,
    len: usize,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let n = model.spec.dimension();
        write_matrix(&model.ladder.q1(t), output(out, len, n * n, "out")?);
        Ok(())
    })
}

/// Row-major `N x N` matrix of `p1(t)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn relq_p1_operator(
    model: *const RelqModel,
    t: f64,
    out: *mut RelqComplex,
    len: usize,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let n = model.spec.dimension();
        write_matrix(&model.ladder.p1(t), output(out, len, n * n, "out")?);
        Ok(())
    })
}

/// Eigenvalue `q_k` of `q1(t)`, `k = 1..=N` in increasing order.
///
/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn relq_root(model: *const RelqModel, k: usize, out: *mut f64) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let q = model.basis.root(k)?;
        *out.as_mut().ok_or_else(|| null("out"))? = q;
        Ok(())
    })
}

/// Amplitudes `<m|q_k(t)>` for `m = -j, ..., +j`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn relq_eigenstate(
    model: *const RelqModel,
    k: usize,
    t: f64,
    out: *mut RelqComplex,
    len: usize,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let state = model.basis.eigenstate(k, t)?.state;
        let buf = output(out, len, model.spec.dimension(), "out")?;
        for (slot, z) in buf.iter_mut().zip(state.amplitudes.iter()) {
            *slot = (*z).into();
        }
        Ok(())
    })
}

/// Transition amplitude `<q_l(t_to)|q_k(t_from)>`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn relq_propagator(
    model: *const RelqModel,
    k: usize,
    l: usize,
    t_from: f64,
    t_to: f64,
    out: *mut RelqComplex,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let z = model.basis.propagator(k, l, t_from, t_to)?;
        *out.as_mut().ok_or_else(|| null("out"))? = z.into();
        Ok(())
    })
}

/// Two-point function of `q1` in the state `|+j>`; needs `N >= 2`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn relq_two_point(
    model: *const RelqModel,
    t: f64,
    t_prime: f64,
    out: *mut RelqTwoPoint,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let g = two_point(&model.spec, t, t_prime)?;
        *out.as_mut().ok_or_else(|| null("out"))? = RelqTwoPoint {
            value: g.value.into(),
            derived: g.derived.into(),
            reference: g.reference.into(),
        };
        Ok(())
    })
}

/// Runs the invariant suite with default settings. `*passed` is set to 1 if
/// every check passed and `*failures` (if not null) to the number of failed
/// checks. A failing check is not an error status.
///
/// # Safety
/// `model` must be a live handle, `passed` valid for one write and
/// `failures` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn relq_verify(
    model: *const RelqModel,
    passed: *mut u8,
    failures: *mut usize,
) -> RelqStatus {
    guard(|| {
        let model = model_ref(model)?;
        let passed = passed.as_mut().ok_or_else(|| null("passed"))?;
        let report = verify_model(&model.spec)?;
        *passed = u8::from(report.passed());
        if let Some(f) = failures.as_mut() {
            *f = report.failures().count();
        }
        Ok(())
    })
}

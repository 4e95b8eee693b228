//! C interface to `angleset`.
//!
//! Point sets are opaque handles owned by the caller and released with
//! [`angleset_points_free`]. Every fallible call returns an
//! [`AnglesetStatus`]; the message for the most recent failure on the calling
//! thread is available from [`angleset_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use angleset::bounds;
use angleset::construct::{self, ConstructOptions, GreedyOptions};
use angleset::format::{self, Meta, PointFile};
use angleset::oracle;
use angleset::verify;
use angleset::{exact, AngleSpec, ConstructionParams, EuclideanPointSet, Error, Mode, Precision};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnglesetStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Opaque point set.
pub struct AnglesetPoints {
    inner: PointFile,
}

/// Summary of an angle certificate. Triples are `(i, apex, k)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnglesetCertificate {
    pub n: usize,
    pub alpha_threshold: f64,
    pub max_angle: f64,
    pub argmax_triple: [usize; 3],
    pub borderline_count: u64,
    pub undecided_count: u64,
    pub violation_count: u64,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(e: &Error) -> AnglesetStatus {
    match e {
        Error::Budget { .. } => AnglesetStatus::BudgetExceeded,
        _ => AnglesetStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<AnglesetStatus, Failure>) -> AnglesetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("{what} is null"));
            AnglesetStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            AnglesetStatus::Internal
        }
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidInput(format!("{what} is not UTF-8"))))
}

unsafe fn handle<'a>(p: *const AnglesetPoints) -> Result<&'a AnglesetPoints, Failure> {
    p.as_ref().ok_or(Failure::Null("point set"))
}

fn emit(out: *mut *mut AnglesetPoints, inner: PointFile) -> Result<AnglesetStatus, Failure> {
    unsafe { *out = Box::into_raw(Box::new(AnglesetPoints { inner })) };
    Ok(AnglesetStatus::Ok)
}

/// Message for the last failed call on this thread. Valid until the next
/// call on the same thread; empty when nothing has failed.
#[no_mangle]
pub extern "C" fn angleset_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Greedy construction in dimension `d` with slack `c` (a decimal string).
/// `k = 0` chooses the edge size automatically; `budget = 0` uses the
/// default candidate budget.
///
/// # Safety
/// `c` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_construct(
    d: usize,
    c: *const c_char,
    k: usize,
    budget: u64,
    out: *mut *mut AnglesetPoints,
) -> AnglesetStatus {
    guard(|| {
        let c_text = str_arg(c, "c")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let slack = exact::parse_decimal(c_text)?;
        let opts = ConstructOptions {
            k: (k > 0).then_some(k),
            greedy: GreedyOptions {
                budget: if budget == 0 { construct::DEFAULT_BUDGET } else { budget },
                ..GreedyOptions::default()
            },
            precision: Precision::from_env()?,
            ..ConstructOptions::default()
        };
        let built = construct::construct_point_set(d, &slack, &opts)?;
        let meta = Meta {
            k: Some(built.hypergraph.params().k()),
            c: Some(c_text.trim().to_string()),
            order: Some("colex".into()),
            seed: None,
        };
        emit(out, PointFile { points: built.points.into(), meta })
    })
}

/// Regular simplex with unit edges: `d + 1` points in `R^(d+1)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_regular_simplex(d: usize, out: *mut *mut AnglesetPoints) -> AnglesetStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let set = oracle::regular_simplex(d, Precision::from_env()?)?;
        emit(out, PointFile { points: set.into(), meta: Meta::default() })
    })
}

/// Point set from `n * d` row-major doubles. Values are taken exactly.
///
/// # Safety
/// `coords` must point to `n * d` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn angleset_points_from_coords(
    coords: *const f64,
    n: usize,
    d: usize,
    out: *mut *mut AnglesetPoints,
) -> AnglesetStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let len = n.checked_mul(d).ok_or(Error::InvalidInput("n * d overflows".into()))?;
        if coords.is_null() && len > 0 {
            return Err(Failure::Null("coords"));
        }
        let flat = if len == 0 { &[][..] } else { std::slice::from_raw_parts(coords, len) };
        let rows: Vec<Vec<f64>> = flat.chunks(d.max(1)).map(<[f64]>::to_vec).collect();
        let set = EuclideanPointSet::from_f64(d, &rows)?;
        emit(out, PointFile { points: set.into(), meta: Meta::default() })
    })
}

/// Reads an `angleset-v1` point-set file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_load(path: *const c_char, out: *mut *mut AnglesetPoints) -> AnglesetStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let file = format::read_point_file(Path::new(path))?;
        emit(out, file)
    })
}

/// Writes the set as an `angleset-v1` file, atomically.
///
/// # Safety
/// `points` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn angleset_save(points: *const AnglesetPoints, path: *const c_char) -> AnglesetStatus {
    guard(|| {
        let h = handle(points)?;
        let path = str_arg(path, "path")?;
        format::write_point_file(Path::new(path), &h.inner)?;
        Ok(AnglesetStatus::Ok)
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `points` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn angleset_points_len(points: *const AnglesetPoints) -> usize {
    points.as_ref().map_or(0, |h| h.inner.points.len())
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `points` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn angleset_points_dim(points: *const AnglesetPoints) -> usize {
    points.as_ref().map_or(0, |h| h.inner.points.d())
}

/// Copies coordinates, rounded to double, row-major into `buf`, which must
/// hold at least `len * dim` values.
///
/// # Safety
/// `points` must be a live handle and `buf` must have `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn angleset_points_coords(
    points: *const AnglesetPoints,
    buf: *mut f64,
    buf_len: usize,
) -> AnglesetStatus {
    guard(|| {
        let h = handle(points)?;
        let rows = h.inner.points.to_f64();
        let need = h.inner.points.len() * h.inner.points.d();
        if need == 0 {
            return Ok(AnglesetStatus::Ok);
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        if buf_len < need {
            return Err(Error::InvalidInput(format!("buffer holds {buf_len} values, {need} needed")).into());
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (slot, x) in dst.iter_mut().zip(rows.iter().flatten()) {
            *slot = *x;
        }
        Ok(AnglesetStatus::Ok)
    })
}

/// Certifies every angle against `alpha` (`pi/3+0.1`, `70deg`, `1.2rad`, ...).
/// Returns `Ok` on pass and `VerificationFailed` on failure; `out` is filled
/// in both cases.
///
/// # Safety
/// `points` must be a live handle, `alpha` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_verify(
    points: *const AnglesetPoints,
    alpha: *const c_char,
    strict: bool,
    out: *mut AnglesetCertificate,
) -> AnglesetStatus {
    guard(|| {
        let h = handle(points)?;
        let alpha = AngleSpec::parse(str_arg(alpha, "alpha")?)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let mode = if strict { Mode::Strict } else { Mode::Weak };
        let cert = verify::max_angle(&h.inner.points, &alpha, mode, Precision::from_env()?)?;
        let (i, j, k) = cert.argmax_triple;
        *out = AnglesetCertificate {
            n: cert.n,
            alpha_threshold: cert.alpha_threshold,
            max_angle: cert.max_angle,
            argmax_triple: [i, j, k],
            borderline_count: cert.borderline_count,
            undecided_count: cert.undecided_count,
            violation_count: cert.violation_count,
            pass: cert.verdict.is_pass(),
        };
        Ok(if cert.verdict.is_pass() {
            AnglesetStatus::Ok
        } else {
            AnglesetStatus::VerificationFailed
        })
    })
}

/// Bound report for `(d, k, c)` as a JSON string; `k = 0` picks `k`
/// automatically. Release the string with [`angleset_string_free`].
///
/// # Safety
/// `c` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_bound_report_json(
    d: usize,
    c: *const c_char,
    k: usize,
    out_json: *mut *mut c_char,
) -> AnglesetStatus {
    guard(|| {
        let slack = exact::parse_decimal(str_arg(c, "c")?)?;
        if out_json.is_null() {
            return Err(Failure::Null("out_json"));
        }
        let k = if k == 0 {
            bounds::choose_k(d as u64, &slack, bounds::KWindow::Default)? as usize
        } else {
            k
        };
        let params = ConstructionParams::new(d, k, slack.clone())?;
        let report = bounds::bound_report(&params, &exact::rational(0, 1), Precision::from_env()?)?;
        let text = serde_json::to_string(&report).map_err(Error::from)?;
        *out_json = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(AnglesetStatus::Ok)
    })
}

/// Jung's circumradius bound for a diameter-1 set in `R^d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn angleset_jung_radius(d: usize, out: *mut f64) -> AnglesetStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = bounds::jung_radius(d as u64, Precision::DEFAULT)?.to_f64();
        Ok(AnglesetStatus::Ok)
    })
}

/// # Safety
/// `points` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn angleset_points_free(points: *mut AnglesetPoints) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn angleset_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

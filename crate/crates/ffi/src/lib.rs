//! C ABI over `symdet`.
//!
//! Polynomials, matrices and cost meters cross the boundary as opaque
//! pointers created and destroyed by this library. Fallible calls return a
//! [`SymdetStatus`] and write their result through an out-pointer; on failure
//! [`symdet_last_error_message`] describes the error for the calling thread.
//! Strings returned by the library must be released with [`symdet_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symdet::costmodel::{self, CostParams};
use symdet::rowsort::{self, Direction, RowKey, SortStrategy};
use symdet::{det, matrix, Error, ExperimentConfig};

/// Bumped on any incompatible change to the exported functions or types.
pub const SYMDET_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    SyntaxError = 3,
    VariableOutOfRange = 4,
    DivisionNotExact = 5,
    IndexOutOfRange = 6,
    DimensionMismatch = 7,
    InvalidRange = 8,
    SizeGuardExceeded = 9,
    MatrixFormat = 10,
    Panic = 11,
    Other = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdetAlgorithm {
    Naive = 0,
    Minor = 1,
    Bareiss = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdetRowKey {
    SumTerms = 0,
    SumSquaredTerms = 1,
    NonzeroCount = 2,
    DistinctMonomials = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymdetDirection {
    Ascending = 0,
    Descending = 1,
}

/// Opaque polynomial handle.
pub struct SymdetPoly(symdet::Polynomial);

/// Opaque matrix handle.
pub struct SymdetMatrix(symdet::SymMatrix);

/// Opaque cost meter handle.
pub struct SymdetMeter(symdet::CostMeter);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SymdetStatus {
    match e {
        Error::Syntax { .. } => SymdetStatus::SyntaxError,
        Error::VariableOutOfRange { .. } => SymdetStatus::VariableOutOfRange,
        Error::DivisionNotExact { .. } => SymdetStatus::DivisionNotExact,
        Error::IndexOutOfRange { .. } => SymdetStatus::IndexOutOfRange,
        Error::DimensionMismatch(_) => SymdetStatus::DimensionMismatch,
        Error::InvalidRange(_) => SymdetStatus::InvalidRange,
        Error::SizeGuardExceeded { .. } => SymdetStatus::SizeGuardExceeded,
        Error::MatrixFormat { .. } => SymdetStatus::MatrixFormat,
        _ => SymdetStatus::Other,
    }
}

struct Failure(SymdetStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SymdetStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and the thread's
/// last-error message.
fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> SymdetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SymdetStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&msg);
            SymdetStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(text).to_str().map_err(|e| Failure(SymdetStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

#[no_mangle]
pub extern "C" fn symdet_abi_version() -> u32 {
    SYMDET_ABI_VERSION
}

/// Message for the most recent failed call on this thread; empty after a
/// successful call. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn symdet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn symdet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial whose variable indices are at most `s`.
#[no_mangle]
pub unsafe extern "C" fn symdet_poly_parse(text: *const c_char, s: usize, out: *mut *mut SymdetPoly) -> SymdetStatus {
    guarded(|| {
        let p = symdet::Polynomial::parse(read_str(text)?, s)?;
        write_out(out, SymdetPoly(p))
    })
}

#[no_mangle]
pub unsafe extern "C" fn symdet_poly_free(p: *mut SymdetPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text of `p`, or null if `p` is null. Free with `symdet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symdet_poly_to_string(p: *const SymdetPoly) -> *mut c_char {
    match p.as_ref() {
        Some(p) => into_c_string(p.0.to_string()),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn symdet_poly_nterms(p: *const SymdetPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.nterms())
}

#[no_mangle]
pub unsafe extern "C" fn symdet_poly_equal(a: *const SymdetPoly, b: *const SymdetPoly) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// Parses the matrix file format (header `n s`, then `;`-separated rows).
#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_parse(text: *const c_char, out: *mut *mut SymdetMatrix) -> SymdetStatus {
    guarded(|| {
        let m = symdet::SymMatrix::parse(read_str(text)?)?;
        write_out(out, SymdetMatrix(m))
    })
}

#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_free(m: *mut SymdetMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// The matrix in file format. Free with `symdet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_to_string(m: *const SymdetMatrix) -> *mut c_char {
    match m.as_ref() {
        Some(m) => into_c_string(m.0.to_string()),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_dim(m: *const SymdetMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_num_vars(m: *const SymdetMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.s())
}

/// Copy of entry `(i, j)` (0-based).
#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_entry(
    m: *const SymdetMatrix,
    i: usize,
    j: usize,
    out: *mut *mut SymdetPoly,
) -> SymdetStatus {
    guarded(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        for index in [i, j] {
            if index >= m.n() {
                return Err(Error::IndexOutOfRange { index, n: m.n() }.into());
            }
        }
        write_out(out, SymdetPoly(m.get(i, j).clone()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn symdet_matrix_gen_one_homogeneous(
    n: usize,
    s: usize,
    coeff_lo: i64,
    coeff_hi: i64,
    seed: u64,
    out: *mut *mut SymdetMatrix,
) -> SymdetStatus {
    guarded(|| {
        let m = matrix::gen_one_homogeneous(n, s, coeff_lo, coeff_hi, seed)?;
        write_out(out, SymdetMatrix(m))
    })
}

#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn symdet_matrix_gen_sparse_linear(
    n: usize,
    s: usize,
    zero_prob: f64,
    max_terms: usize,
    coeff_lo: i64,
    coeff_hi: i64,
    seed: u64,
    out: *mut *mut SymdetMatrix,
) -> SymdetStatus {
    guarded(|| {
        let cfg = ExperimentConfig { n, s, zero_prob, max_terms, coeff_lo, coeff_hi, seed, trials: 1 };
        write_out(out, SymdetMatrix(matrix::gen_sparse_linear(&cfg)?))
    })
}

#[no_mangle]
pub extern "C" fn symdet_meter_new() -> *mut SymdetMeter {
    Box::into_raw(Box::new(SymdetMeter(symdet::CostMeter::new())))
}

#[no_mangle]
pub unsafe extern "C" fn symdet_meter_free(m: *mut SymdetMeter) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn symdet_meter_reset(m: *mut SymdetMeter) {
    if let Some(m) = m.as_mut() {
        m.0 = symdet::CostMeter::new();
    }
}

#[no_mangle]
pub unsafe extern "C" fn symdet_meter_poly_mults(m: *const SymdetMeter) -> u64 {
    m.as_ref().map_or(0, |m| m.0.poly_mults)
}

#[no_mangle]
pub unsafe extern "C" fn symdet_meter_poly_divs(m: *const SymdetMeter) -> u64 {
    m.as_ref().map_or(0, |m| m.0.poly_divs)
}

/// Modeled integer operations as a decimal string (the count is unbounded).
/// Free with `symdet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn symdet_meter_modeled_int_ops(m: *const SymdetMeter) -> *mut c_char {
    match m.as_ref() {
        Some(m) => into_c_string(m.0.modeled_int_ops.to_string()),
        None => ptr::null_mut(),
    }
}

/// Determinant of `m`. `meter` may be null; otherwise it accumulates.
#[no_mangle]
pub unsafe extern "C" fn symdet_determinant(
    m: *const SymdetMatrix,
    algorithm: SymdetAlgorithm,
    meter: *mut SymdetMeter,
    out: *mut *mut SymdetPoly,
) -> SymdetStatus {
    guarded(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        let algorithm = match algorithm {
            SymdetAlgorithm::Naive => det::Algorithm::Naive,
            SymdetAlgorithm::Minor => det::Algorithm::Minor,
            SymdetAlgorithm::Bareiss => det::Algorithm::Bareiss,
        };
        let d = det::determinant(m, algorithm, meter.as_mut().map(|m| &mut m.0))?;
        write_out(out, SymdetPoly(d))
    })
}

fn strategy(key: SymdetRowKey, direction: SymdetDirection) -> SortStrategy {
    let key = match key {
        SymdetRowKey::SumTerms => RowKey::SumTerms,
        SymdetRowKey::SumSquaredTerms => RowKey::SumSquaredTerms,
        SymdetRowKey::NonzeroCount => RowKey::NonzeroCount,
        SymdetRowKey::DistinctMonomials => RowKey::DistinctMonomials,
    };
    let direction = match direction {
        SymdetDirection::Ascending => Direction::Ascending,
        SymdetDirection::Descending => Direction::Descending,
    };
    SortStrategy::new(key, direction)
}

/// Minor expansion after sorting rows by `key` in `direction`; the result is
/// sign-corrected to equal the determinant of `m`.
#[no_mangle]
pub unsafe extern "C" fn symdet_sorted_minor_expansion(
    m: *const SymdetMatrix,
    key: SymdetRowKey,
    direction: SymdetDirection,
    meter: *mut SymdetMeter,
    out: *mut *mut SymdetPoly,
) -> SymdetStatus {
    guarded(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        let d = rowsort::sorted_minor_expansion(m, strategy(key, direction), meter.as_mut().map(|m| &mut m.0));
        write_out(out, SymdetPoly(d))
    })
}

/// Writes the stable sort permutation into `perm_out` (length `symdet_matrix_dim`)
/// and its sign (+1 or -1) into `sign_out`.
#[no_mangle]
pub unsafe extern "C" fn symdet_sort_permutation(
    m: *const SymdetMatrix,
    key: SymdetRowKey,
    direction: SymdetDirection,
    perm_out: *mut usize,
    perm_len: usize,
    sign_out: *mut i32,
) -> SymdetStatus {
    guarded(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        if perm_out.is_null() || sign_out.is_null() {
            return Err(null("output buffer"));
        }
        if perm_len != m.n() {
            return Err(Error::DimensionMismatch(format!("buffer of {perm_len} for dimension {}", m.n())).into());
        }
        let perm = rowsort::sort_permutation(m, strategy(key, direction));
        std::slice::from_raw_parts_mut(perm_out, perm_len).copy_from_slice(perm.as_slice());
        *sign_out = i32::from(perm.sign());
        Ok(())
    })
}

/// Closed-form minor-expansion cost as a decimal string; null if `n` or `s` is 0.
#[no_mangle]
pub extern "C" fn symdet_cost_cm(n: u32, s: u32) -> *mut c_char {
    if n == 0 || s == 0 {
        return ptr::null_mut();
    }
    into_c_string(costmodel::c_m(CostParams::new(n, s)).to_string())
}

/// Closed-form elimination cost as a decimal string; null if `n` or `s` is 0.
#[no_mangle]
pub extern "C" fn symdet_cost_cg(n: u32, s: u32) -> *mut c_char {
    if n == 0 || s == 0 {
        return ptr::null_mut();
    }
    into_c_string(costmodel::c_g(CostParams::new(n, s)).to_string())
}

/// Exact modeled minor-expansion cost of `m` as a decimal string.
#[no_mangle]
pub unsafe extern "C" fn symdet_cost_cm_exact(m: *const SymdetMatrix, out: *mut *mut c_char) -> SymdetStatus {
    guarded(|| {
        let m = &m.as_ref().ok_or_else(|| null("matrix"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = into_c_string(costmodel::c_m_exact(m)?.to_string());
        Ok(())
    })
}

/// Smallest `n <= n_cap` where the minor-expansion cost model exceeds
/// elimination's, or 0 if there is none.
#[no_mangle]
pub extern "C" fn symdet_crossover_n(s: u32, n_cap: u32) -> u32 {
    if s == 0 {
        return 0;
    }
    costmodel::crossover_n(s, n_cap).unwrap_or(0)
}

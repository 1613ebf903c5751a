//! C ABI for the finite inverse semigroup library.
//!
//! Conventions: every function returns an error code (`0` success, `1`
//! null argument, `2` parse error, `3` structural failure, `4` size cap
//! exceeded) or a pointer that is null on failure. The most recent failure
//! message for the calling thread is available via [`invsemi_last_error`].
//! Strings returned by the library are owned by the caller and must be
//! released with [`invsemi_string_free`]; tables with
//! [`invsemi_table_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use invsemi::homogeneity::{is_homogeneous, HomogOptions, HomogeneityError, Mode};
use invsemi::inverse::try_inverse;
use invsemi::morphisms::automorphism_group;
use invsemi::morphisms::MorphismError;
use invsemi::tables::{SemigroupTable, TableError};

pub const INVSEMI_OK: c_int = 0;
pub const INVSEMI_ERR_NULL: c_int = 1;
pub const INVSEMI_ERR_PARSE: c_int = 2;
pub const INVSEMI_ERR_STRUCTURE: c_int = 3;
pub const INVSEMI_ERR_CAP: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty string has no interior nul"));
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(sanitized).expect("nul bytes were replaced");
    });
}

fn table_error_code(e: &TableError) -> c_int {
    match e {
        TableError::NotAssociative { .. }
        | TableError::NotClosed { .. }
        | TableError::EmptyGeneratorSet => INVSEMI_ERR_STRUCTURE,
        TableError::SizeCapExceeded { .. } => INVSEMI_ERR_CAP,
        _ => INVSEMI_ERR_PARSE,
    }
}

/// An opaque finite semigroup multiplication table.
pub struct InvsemiTable {
    inner: SemigroupTable,
}

/// Last failure message for this thread; empty when no failure occurred.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn invsemi_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn invsemi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a plain-text multiplication table (`n` rows of `n` entries).
/// On success stores a new table in `out` and returns 0.
///
/// # Safety
/// `text` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_parse(
    text: *const c_char,
    out: *mut *mut InvsemiTable,
) -> c_int {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return INVSEMI_ERR_NULL;
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("table text is not valid UTF-8");
            return INVSEMI_ERR_PARSE;
        }
    };
    match SemigroupTable::parse(text) {
        Ok(table) => {
            *out = Box::into_raw(Box::new(InvsemiTable { inner: table }));
            INVSEMI_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            *out = ptr::null_mut();
            table_error_code(&e)
        }
    }
}

/// Builds a table from `size * size` row-major entries.
///
/// # Safety
/// `entries` must point to `size * size` readable values and `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_from_entries(
    size: usize,
    entries: *const usize,
    out: *mut *mut InvsemiTable,
) -> c_int {
    if entries.is_null() || out.is_null() {
        set_error("null argument");
        return INVSEMI_ERR_NULL;
    }
    let slice = std::slice::from_raw_parts(entries, size.saturating_mul(size));
    match SemigroupTable::new(size, slice.to_vec()) {
        Ok(table) => {
            *out = Box::into_raw(Box::new(InvsemiTable { inner: table }));
            INVSEMI_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            *out = ptr::null_mut();
            table_error_code(&e)
        }
    }
}

/// Releases a table. Null is ignored.
///
/// # Safety
/// `t` must be a table returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_free(t: *mut InvsemiTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of elements, or 0 for null.
///
/// # Safety
/// `t` must be null or a live table from this library.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_size(t: *const InvsemiTable) -> usize {
    if t.is_null() {
        return 0;
    }
    (*t).inner.size()
}

/// The product `a * b`, or -1 when an index is out of range or the table
/// is null.
///
/// # Safety
/// `t` must be null or a live table from this library.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_product(
    t: *const InvsemiTable,
    a: usize,
    b: usize,
) -> i64 {
    if t.is_null() {
        set_error("null table");
        return -1;
    }
    let table = &(*t).inner;
    if a >= table.size() || b >= table.size() {
        set_error("element index out of range");
        return -1;
    }
    table.op(a, b) as i64
}

fn string_to_c(out: String) -> *mut c_char {
    match CString::new(out) {
        Ok(s) => s.into_raw(),
        Err(_) => {
            set_error("output contained an interior nul byte");
            ptr::null_mut()
        }
    }
}

/// The plain-text rendering of the table (parseable back). Null on error.
///
/// # Safety
/// `t` must be null or a live table from this library.
#[no_mangle]
pub unsafe extern "C" fn invsemi_table_text(t: *const InvsemiTable) -> *mut c_char {
    if t.is_null() {
        set_error("null table");
        return ptr::null_mut();
    }
    string_to_c((*t).inner.to_text())
}

/// Structural classification of an inverse semigroup as a JSON report.
/// Null when the table is not an inverse semigroup.
///
/// # Safety
/// `t` must be null or a live table from this library.
#[no_mangle]
pub unsafe extern "C" fn invsemi_analyze_json(t: *const InvsemiTable) -> *mut c_char {
    if t.is_null() {
        set_error("null table");
        return ptr::null_mut();
    }
    match try_inverse(&(*t).inner) {
        Ok(s) => string_to_c(
            serde_json::to_string(&s.classify()).expect("reports serialize"),
        ),
        Err(e) => {
            set_error(&format!("not an inverse semigroup: {e}"));
            ptr::null_mut()
        }
    }
}

/// Homogeneity report as JSON. `inverse_mode` nonzero checks isomorphisms
/// between inverse subsemigroups, zero between plain subsemigroups; `cap`
/// of 0 uses the default size cap. Null on failure.
///
/// # Safety
/// `t` must be null or a live table from this library.
#[no_mangle]
pub unsafe extern "C" fn invsemi_homog_json(
    t: *const InvsemiTable,
    inverse_mode: c_int,
    cap: usize,
) -> *mut c_char {
    if t.is_null() {
        set_error("null table");
        return ptr::null_mut();
    }
    let s = match try_inverse(&(*t).inner) {
        Ok(s) => s,
        Err(e) => {
            set_error(&format!("not an inverse semigroup: {e}"));
            return ptr::null_mut();
        }
    };
    let mut opts = HomogOptions::default();
    if cap > 0 {
        opts.cap = cap;
    }
    let mode = if inverse_mode != 0 { Mode::Inverse } else { Mode::Plain };
    match is_homogeneous(&s, mode, &opts) {
        Ok(report) => {
            string_to_c(serde_json::to_string(&report).expect("reports serialize"))
        }
        Err(e @ HomogeneityError::SizeCapExceeded { .. }) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Counts the automorphisms of the table. `cap` of 0 uses the default.
/// Returns an error code; the count is stored in `out`.
///
/// # Safety
/// `t` must be null or a live table; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn invsemi_aut_count(
    t: *const InvsemiTable,
    cap: usize,
    out: *mut u64,
) -> c_int {
    if t.is_null() || out.is_null() {
        set_error("null argument");
        return INVSEMI_ERR_NULL;
    }
    let effective = if cap > 0 {
        cap
    } else {
        invsemi::morphisms::DEFAULT_AUT_CAP
    };
    match automorphism_group(&(*t).inner, effective) {
        Ok(autos) => {
            *out = autos.len() as u64;
            INVSEMI_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            match e {
                MorphismError::SizeCapExceeded { .. } => INVSEMI_ERR_CAP,
                _ => INVSEMI_ERR_STRUCTURE,
            }
        }
    }
}

/// Flattens a system-of-groups JSON document to its multiplication table.
/// On success stores a new table in `out` and returns 0.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn invsemi_system_flatten(
    json: *const c_char,
    out: *mut *mut InvsemiTable,
) -> c_int {
    if json.is_null() || out.is_null() {
        set_error("null argument");
        return INVSEMI_ERR_NULL;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("system JSON is not valid UTF-8");
            return INVSEMI_ERR_PARSE;
        }
    };
    match invsemi::clifford::CliffordSystem::from_json(text) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(InvsemiTable {
                inner: sys.flatten_table().clone(),
            }));
            INVSEMI_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            *out = ptr::null_mut();
            match e {
                invsemi::clifford::CliffordError::BadFormat(_) => INVSEMI_ERR_PARSE,
                _ => INVSEMI_ERR_STRUCTURE,
            }
        }
    }
}

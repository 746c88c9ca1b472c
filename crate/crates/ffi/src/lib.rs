//! C ABI for `tfb-core`.
//!
//! Mass functions cross the boundary as opaque `TfbMass` handles created from
//! the JSON interchange format and released with [`tfb_mass_free`]. Every
//! fallible call returns a [`TfbStatus`] and writes its result through an out
//! pointer; the message of the most recent failure on the calling thread is
//! available from [`tfb_last_error`].
//!
//! Strings handed out by this library must be released with
//! [`tfb_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tfb_core::measures::{deng_entropy, fb_entropy, shannon, tfb_entropy, tfb_vacuous};
use tfb_core::split::{deng_volume, leaf_count, split_tree_entropy};
use tfb_core::volume::{max_tfb_bpa, VolumeQuery};
use tfb_core::{Error, Frame, MassFunction};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Frame, document or mass-function axiom violation.
    InvalidInput = 3,
    InvalidOrder = 4,
    Overflow = 5,
    TreeTooLarge = 6,
    BufferTooSmall = 7,
    NotConverged = 8,
    Panic = 99,
}

/// Opaque mass-function handle.
pub struct TfbMass {
    inner: MassFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> TfbStatus {
    match e {
        Error::InvalidOrder(_) => TfbStatus::InvalidOrder,
        Error::Overflow(_) => TfbStatus::Overflow,
        Error::TreeTooLarge { .. } => TfbStatus::TreeTooLarge,
        Error::NonConvergence { .. } => TfbStatus::NotConverged,
        _ => TfbStatus::InvalidInput,
    }
}

fn fail(e: Error) -> TfbStatus {
    set_last_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> TfbStatus) -> TfbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            TfbStatus::Panic
        }
    }
}

fn null(what: &str) -> TfbStatus {
    set_last_error(format!("{what} is null"));
    TfbStatus::NullPointer
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, TfbStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_last_error(format!("{what}: {e}"));
        TfbStatus::InvalidUtf8
    })
}

unsafe fn write_f64(out: *mut f64, value: Result<f64, Error>) -> TfbStatus {
    if out.is_null() {
        return null("out");
    }
    match value {
        Ok(v) => {
            *out = v;
            TfbStatus::Ok
        }
        Err(e) => fail(e),
    }
}

unsafe fn mass<'a>(m: *const TfbMass) -> Result<&'a MassFunction, TfbStatus> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("mass handle"))
}

fn into_handle(m: MassFunction) -> *mut TfbMass {
    Box::into_raw(Box::new(TfbMass { inner: m }))
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes, or 0 when
/// no error has been recorded.
#[no_mangle]
pub unsafe extern "C" fn tfb_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Parse a BPA document into a new handle.
#[no_mangle]
pub unsafe extern "C" fn tfb_mass_from_json(json: *const c_char, out: *mut *mut TfbMass) -> TfbStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let text = match c_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match MassFunction::from_json(text) {
            Ok(m) => {
                *out = into_handle(m);
                TfbStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Vacuous BPA `m(Θ) = 1` on a frame with the given labels.
#[no_mangle]
pub unsafe extern "C" fn tfb_mass_vacuous(labels: *const *const c_char, n: usize, out: *mut *mut TfbMass) -> TfbStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match frame_from_labels(labels, n) {
            Ok(frame) => {
                *out = into_handle(MassFunction::vacuous(frame));
                TfbStatus::Ok
            }
            Err(s) => s,
        }
    })
}

unsafe fn frame_from_labels(labels: *const *const c_char, n: usize) -> Result<Frame, TfbStatus> {
    if labels.is_null() {
        return Err(null("labels"));
    }
    let mut names = Vec::with_capacity(n);
    for i in 0..n {
        names.push(c_str(*labels.add(i), "label")?.to_string());
    }
    Frame::new(names).map_err(fail)
}

/// Release a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tfb_mass_free(m: *mut TfbMass) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of frame elements, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tfb_mass_frame_size(m: *const TfbMass) -> usize {
    m.as_ref().map(|h| h.inner.frame().len()).unwrap_or(0)
}

/// Canonical JSON of a handle; free the string with [`tfb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tfb_mass_to_json(m: *const TfbMass, out: *mut *mut c_char) -> TfbStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match mass(m) {
            Ok(m) => {
                *out = CString::new(m.to_json()).expect("json has no nul").into_raw();
                TfbStatus::Ok
            }
            Err(s) => s,
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn tfb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Shannon entropy (bits) of `len` probabilities.
#[no_mangle]
pub unsafe extern "C" fn tfb_shannon(p: *const f64, len: usize, out: *mut f64) -> TfbStatus {
    guard(|| {
        if p.is_null() {
            return null("p");
        }
        let p = std::slice::from_raw_parts(p, len);
        write_f64(out, shannon(p))
    })
}

#[no_mangle]
pub unsafe extern "C" fn tfb_deng_entropy(m: *const TfbMass, out: *mut f64) -> TfbStatus {
    guard(|| match mass(m) {
        Ok(m) => write_f64(out, Ok(deng_entropy(m))),
        Err(s) => s,
    })
}

#[no_mangle]
pub unsafe extern "C" fn tfb_fb_entropy(m: *const TfbMass, out: *mut f64) -> TfbStatus {
    guard(|| match mass(m) {
        Ok(m) => write_f64(out, fb_entropy(m)),
        Err(s) => s,
    })
}

/// k-order TFB entropy; `k = 0` yields `InvalidOrder`.
#[no_mangle]
pub unsafe extern "C" fn tfb_tfb_entropy(m: *const TfbMass, k: u64, out: *mut f64) -> TfbStatus {
    guard(|| match mass(m) {
        Ok(m) => write_f64(out, tfb_entropy(m, k)),
        Err(s) => s,
    })
}

/// TFB entropy of the vacuous BPA on `n` elements.
#[no_mangle]
pub unsafe extern "C" fn tfb_tfb_vacuous(n: u32, k: u64, out: *mut f64) -> TfbStatus {
    guard(|| write_f64(out, tfb_vacuous(n, k)))
}

/// Entropy read off the explicit k-round split tree.
#[no_mangle]
pub unsafe extern "C" fn tfb_split_tree_entropy(m: *const TfbMass, k: u64, out: *mut f64) -> TfbStatus {
    guard(|| match mass(m) {
        Ok(m) => write_f64(out, split_tree_entropy(m, k)),
        Err(s) => s,
    })
}

/// `(k+1)^a − k^a`.
#[no_mangle]
pub unsafe extern "C" fn tfb_leaf_count(a: u32, k: u64, out: *mut u64) -> TfbStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match leaf_count(a, k) {
            Ok(v) => {
                *out = v;
                TfbStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Information volume `log2((k+2)^n − (k+1)^n)`.
#[no_mangle]
pub unsafe extern "C" fn tfb_hoivmf_value(n: u32, k: u64, out: *mut f64) -> TfbStatus {
    guard(|| write_f64(out, VolumeQuery::new(n, k).map(VolumeQuery::value)))
}

/// BPA attaining the k-order information volume on the given labels.
#[no_mangle]
pub unsafe extern "C" fn tfb_max_tfb_bpa(
    labels: *const *const c_char,
    n: usize,
    k: u64,
    out: *mut *mut TfbMass,
) -> TfbStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let frame = match frame_from_labels(labels, n) {
            Ok(f) => f,
            Err(s) => return s,
        };
        match max_tfb_bpa(&frame, k) {
            Ok(m) => {
                *out = into_handle(m);
                TfbStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Iterated Deng information volume. Values go to `values[0..*len]`.
///
/// Returns `BufferTooSmall` (with `*len` set to the required size) when
/// `capacity` is short, and `NotConverged` when `max_iter` was reached first;
/// in that case the values are still written.
#[no_mangle]
pub unsafe extern "C" fn tfb_deng_volume(
    m: *const TfbMass,
    epsilon: f64,
    max_iter: usize,
    values: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> TfbStatus {
    guard(|| {
        let m = match mass(m) {
            Ok(m) => m,
            Err(s) => return s,
        };
        if len.is_null() {
            return null("len");
        }
        let dv = match deng_volume(m, epsilon, max_iter) {
            Ok(dv) => dv,
            Err(e) => return fail(e),
        };
        *len = dv.values.len();
        if dv.values.len() > capacity || values.is_null() {
            set_last_error(format!("{} values do not fit capacity {capacity}", dv.values.len()));
            return TfbStatus::BufferTooSmall;
        }
        for (i, &(_, v)) in dv.values.iter().enumerate() {
            *values.add(i) = v;
        }
        match dv.check() {
            Ok(()) => TfbStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

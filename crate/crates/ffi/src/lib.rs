//! C interface to ckdecide.
//!
//! Inputs are parsed once into an opaque `CkGraph` handle. Every function
//! returns a `CkStatus`; on failure `ck_last_error` describes what went
//! wrong on the calling thread. Strings handed out by the library are freed
//! with `ck_string_free`, handles with `ck_graph_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ckdecide::dot::export_dot;
use ckdecide::presentations::{parse, Format};
use ckdecide::report::{analyze, parse_checks};
use ckdecide::verify::verify_report_json;
use ckdecide::{Options, Parsed};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    UnknownFormat = 3,
    ParseError = 4,
    UnknownCheck = 5,
    /// No requested check applies to this kind of input. The report is
    /// still produced.
    Unsupported = 6,
    /// The report did not verify, or is malformed.
    VerifyFailed = 7,
    Internal = 8,
}

/// A parsed input graph.
pub struct CkGraph {
    parsed: Parsed,
    format: Format,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: CkStatus, msg: impl Into<String>) -> CkStatus {
    set_error(msg);
    status
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CkStatus> {
    if p.is_null() {
        return Err(fail(CkStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(CkStatus::InvalidUtf8, "argument is not UTF-8"))
}

fn guarded(f: impl FnOnce() -> CkStatus) -> CkStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CkStatus::Internal, "internal error"))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> CkStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CkStatus::Ok
        }
        Err(_) => fail(CkStatus::Internal, "output contains a NUL byte"),
    }
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}

/// Parses `text` as `format` ("edgelist", "matrix" or "periodic").
///
/// # Safety
/// `text` and `format` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_parse(text: *const c_char, format: *const c_char, out: *mut *mut CkGraph) -> CkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CkStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let (text, format) = match (read_str(text), read_str(format)) {
            (Ok(t), Ok(f)) => (t, f),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let Ok(format) = format.parse::<Format>() else {
            return fail(CkStatus::UnknownFormat, format!("unknown format `{format}`"));
        };
        match parse(text, format) {
            Ok(parsed) => {
                *out = Box::into_raw(Box::new(CkGraph { parsed, format }));
                CkStatus::Ok
            }
            Err(e) => fail(CkStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `g` is null or a handle from `ck_graph_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_graph_free(g: *mut CkGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Runs the comma-separated `checks` ("all" for every check) and writes the
/// JSON report to `out_json`. `depth` 0 picks the default exploration depth.
///
/// # Safety
/// `g` is a live handle, `checks` a NUL-terminated string, `out_json`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ck_analyze_json(
    g: *const CkGraph,
    checks: *const c_char,
    depth: u32,
    out_json: *mut *mut c_char,
) -> CkStatus {
    guarded(|| {
        if g.is_null() || out_json.is_null() {
            return fail(CkStatus::NullArgument, "null handle or output pointer");
        }
        *out_json = ptr::null_mut();
        let checks = match read_str(checks) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let checks = match parse_checks(checks) {
            Ok(c) => c,
            Err(e) => return fail(CkStatus::UnknownCheck, e),
        };
        let g = &*g;
        let opts = Options {
            depth: (depth > 0).then_some(depth),
            ..Options::default()
        };
        let (report, supported) = analyze(&g.parsed, &checks, &opts, g.format, None);
        match give_string(out_json, report.to_json()) {
            CkStatus::Ok if !supported => fail(CkStatus::Unsupported, "no requested check applies to this input"),
            s => s,
        }
    })
}

/// Graphviz text; `copies` bounds periodic inputs (0 for the default).
///
/// # Safety
/// `g` is a live handle and `out_dot` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_export_dot(g: *const CkGraph, copies: u32, out_dot: *mut *mut c_char) -> CkStatus {
    guarded(|| {
        if g.is_null() || out_dot.is_null() {
            return fail(CkStatus::NullArgument, "null handle or output pointer");
        }
        give_string(out_dot, export_dot(&(*g).parsed, (copies > 0).then_some(copies)))
    })
}

/// Re-checks every certificate of a JSON report. `CK_STATUS_OK` means all
/// verified.
///
/// # Safety
/// `json` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_json(json: *const c_char) -> CkStatus {
    guarded(|| {
        let json = match read_str(json) {
            Ok(j) => j,
            Err(s) => return s,
        };
        match verify_report_json(json) {
            Ok(out) => match out.results.iter().find(|(_, r)| r.is_err()) {
                None => CkStatus::Ok,
                Some((k, Err(e))) => fail(CkStatus::VerifyFailed, format!("{k}: {e}")),
                Some(_) => unreachable!(),
            },
            Err(e) => fail(CkStatus::VerifyFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

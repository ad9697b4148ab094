//! C ABI over the cohbundle library.
//!
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free` function. Strings returned through out-parameters are
//! NUL-terminated UTF-8 and must be released with [`cb_string_free`]. Every
//! fallible call returns a [`CbStatus`]; on failure the message is available
//! from [`cb_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use cohbundle::cli::{self, Cli, Workspace};
use cohbundle::coh::h2_circle;
use cohbundle::grp::{make_abelian, FiniteGroup};

/// Status codes. `Mismatch` and `InputError` agree with the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    Mismatch = 1,
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Internal = 5,
}

/// A loaded and validated workspace.
pub struct CbWorkspace(Workspace);

/// A finite group.
pub struct CbGroup(FiniteGroup);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn guard(f: impl FnOnce() -> Result<(), (CbStatus, String)>) -> CbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CbStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CbStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (CbStatus, String)> {
    if p.is_null() {
        return Err((CbStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (CbStatus::InvalidUtf8, e.to_string()))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes removed").into_raw()
}

fn null_out() -> (CbStatus, String) {
    (CbStatus::NullPointer, "null output pointer".into())
}

/// Parses a workspace document. `max_order` bounds accepted group orders.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_workspace_from_json(json: *const c_char, max_order: usize, out: *mut *mut CbWorkspace) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_out());
        }
        *out = ptr::null_mut();
        let text = read_str(json)?;
        let ws = Workspace::from_bytes(text.as_bytes(), max_order).map_err(|e| (CbStatus::InputError, e.to_string()))?;
        *out = Box::into_raw(Box::new(CbWorkspace(ws)));
        Ok(())
    })
}

/// # Safety
/// `ws` must come from [`cb_workspace_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cb_workspace_free(ws: *mut CbWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Runs a command line (without the program name, whitespace separated)
/// against a loaded workspace, e.g. `"verify all --seed 3"`. The JSON report
/// is stored in `out_report` even when the status is `Mismatch`.
///
/// # Safety
/// `ws` must be a live workspace handle, `command` a NUL-terminated string
/// and `out_report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_run(ws: *const CbWorkspace, command: *const c_char, out_report: *mut *mut c_char) -> CbStatus {
    guard(|| {
        if out_report.is_null() {
            return Err(null_out());
        }
        *out_report = ptr::null_mut();
        if ws.is_null() {
            return Err((CbStatus::NullPointer, "null workspace".into()));
        }
        let command = read_str(command)?;
        let args = std::iter::once("cohbundle").chain(command.split_whitespace());
        let parsed = Cli::try_parse_from(args).map_err(|e| (CbStatus::InputError, e.render().to_string()))?;
        if parsed.workspace.is_some() || parsed.output.is_some() {
            return Err((CbStatus::InputError, "--workspace and --output are not available here".into()));
        }
        let (text, code) = cli::run_loaded(&parsed, &(*ws).0);
        *out_report = to_c_string(text);
        match code {
            cli::EXIT_PASS => Ok(()),
            cli::EXIT_MISMATCH => Err((CbStatus::Mismatch, "verification mismatch".into())),
            _ => Err((CbStatus::InputError, "input error; see the report".into())),
        }
    })
}

/// Builds `Z_{d_1} x ... x Z_{d_k}`.
///
/// # Safety
/// `factors` must point to `len` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cb_group_abelian(factors: *const u64, len: usize, out: *mut *mut CbGroup) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_out());
        }
        *out = ptr::null_mut();
        if factors.is_null() && len > 0 {
            return Err((CbStatus::NullPointer, "null factor array".into()));
        }
        let f = if len == 0 { &[][..] } else { std::slice::from_raw_parts(factors, len) };
        let g = if f.is_empty() { FiniteGroup::trivial() } else { make_abelian(f).map_err(|e| (CbStatus::InputError, e.to_string()))? };
        *out = Box::into_raw(Box::new(CbGroup(g)));
        Ok(())
    })
}

/// Order of a group, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn cb_group_order(g: *const CbGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// # Safety
/// `g` must come from [`cb_group_abelian`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cb_group_free(g: *mut CbGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `H^2(G, T)` as a JSON object with `invariants` and `order`.
///
/// # Safety
/// `g` must be a live group handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cb_h2_circle(g: *const CbGroup, out_json: *mut *mut c_char) -> CbStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null_out());
        }
        *out_json = ptr::null_mut();
        let g = g.as_ref().ok_or((CbStatus::NullPointer, "null group".to_string()))?;
        let h = h2_circle(&g.0).map_err(|e| (CbStatus::InputError, e.to_string()))?;
        let v = serde_json::json!({"invariants": h.invariants(), "order": h.order() as u64});
        *out_json = to_c_string(v.to_string());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

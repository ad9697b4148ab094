use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cohbundle_ffi::*;
use serde_json::Value;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cb_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cb_last_error_message()) }.to_str().unwrap().to_owned()
}

fn load(name: &str) -> *mut CbWorkspace {
    let path = format!("{}/../core/workspaces/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let json = CString::new(std::fs::read(path).unwrap()).unwrap();
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { cb_workspace_from_json(json.as_ptr(), 512, &mut ws) }, CbStatus::Ok);
    assert!(!ws.is_null());
    ws
}

#[test]
fn verify_matches_golden() {
    for name in ["klein", "heisenberg3", "z2z4"] {
        let ws = load(name);
        let cmd = CString::new("verify all").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { cb_run(ws, cmd.as_ptr(), &mut out) }, CbStatus::Ok);
        let golden = format!("{}/../core/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"));
        assert_eq!(take_string(out), std::fs::read_to_string(golden).unwrap());
        unsafe { cb_workspace_free(ws) };
    }
}

#[test]
fn run_subcommand_with_seed() {
    let ws = load("klein");
    let cmd = CString::new("verify lem-pointwise --seed 5").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cb_run(ws, cmd.as_ptr(), &mut out) }, CbStatus::Ok);
    let v: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["seed"], 5);
    unsafe { cb_workspace_free(ws) };
}

#[test]
fn mismatch_still_returns_report() {
    let json = CString::new(
        r#"{"cochains": {"w": {"group": "klein", "degree": 2, "modulus": 2,
            "values": [0,0,0,0, 0,0,0,0, 0,1,0,1, 0,1,0,1]}},
            "checks": [{"id": "w", "kind": "lem-pointwise", "cochain": "w"}]}"#,
    )
    .unwrap();
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { cb_workspace_from_json(json.as_ptr(), 512, &mut ws) }, CbStatus::Ok);
    let cmd = CString::new("verify all").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cb_run(ws, cmd.as_ptr(), &mut out) }, CbStatus::Mismatch);
    let v: Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["pass"], false);
    unsafe { cb_workspace_free(ws) };
}

#[test]
fn invalid_workspace_reports_error() {
    let json = CString::new(r#"{"checks": [{"id": "a", "kind": "cor-pt-group", "extension": "missing"}]}"#).unwrap();
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { cb_workspace_from_json(json.as_ptr(), 512, &mut ws) }, CbStatus::InputError);
    assert!(ws.is_null());
    assert!(last_error().contains("missing"), "{}", last_error());
}

#[test]
fn bad_command_line_is_input_error() {
    let ws = load("klein");
    let cmd = CString::new("frobnicate").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cb_run(ws, cmd.as_ptr(), &mut out) }, CbStatus::InputError);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
    unsafe { cb_workspace_free(ws) };
}

#[test]
fn null_arguments() {
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { cb_workspace_from_json(ptr::null(), 512, &mut ws) }, CbStatus::NullPointer);
    assert_eq!(unsafe { cb_workspace_from_json(c"{}".as_ptr(), 512, ptr::null_mut()) }, CbStatus::NullPointer);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cb_run(ptr::null(), c"verify all".as_ptr(), &mut out) }, CbStatus::NullPointer);
    assert_eq!(unsafe { cb_h2_circle(ptr::null(), &mut out) }, CbStatus::NullPointer);
    assert_eq!(unsafe { cb_group_order(ptr::null()) }, 0);
    unsafe {
        cb_workspace_free(ptr::null_mut());
        cb_group_free(ptr::null_mut());
        cb_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8() {
    let bytes = [0xffu8, 0xfe, 0];
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { cb_workspace_from_json(bytes.as_ptr().cast(), 512, &mut ws) }, CbStatus::InvalidUtf8);
}

#[test]
fn abelian_group_and_h2() {
    let cases: [(&[u64], usize, Value); 4] = [
        (&[], 1, serde_json::json!([])),
        (&[6], 6, serde_json::json!([])),
        (&[2, 2], 4, serde_json::json!([2])),
        (&[2, 4, 6], 48, serde_json::json!([2, 2, 2])),
    ];
    for (factors, order, inv) in cases {
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { cb_group_abelian(factors.as_ptr(), factors.len(), &mut g) }, CbStatus::Ok);
        assert_eq!(unsafe { cb_group_order(g) }, order);
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { cb_h2_circle(g, &mut out) }, CbStatus::Ok);
        let v: Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["invariants"], inv, "{factors:?}");
        unsafe { cb_group_free(g) };
    }
}

#[test]
fn zero_factor_is_rejected() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cb_group_abelian([0u64].as_ptr(), 1, &mut g) }, CbStatus::InputError);
    assert!(g.is_null());
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(format!("{}/include/cohbundle.h", env!("CARGO_MANIFEST_DIR"))).unwrap();
    for f in [
        "cb_workspace_from_json",
        "cb_workspace_free",
        "cb_run",
        "cb_group_abelian",
        "cb_group_order",
        "cb_group_free",
        "cb_h2_circle",
        "cb_string_free",
        "cb_last_error_message",
        "CB_STATUS_INVALID_UTF8 = 4",
    ] {
        assert!(header.contains(f), "{f}");
    }
}

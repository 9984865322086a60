use std::ffi::{CStr, CString};
use std::ptr;

use gl11_ffi::*;

const E2: &str = "weights = [[1, 0], [1, 0]]\npoints = [\"0\", \"1/2\"]\ntwist = [\"1\", \"1\"]\n";

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gl11_string_free(s) };
    out
}

#[test]
fn spec_round_trip_and_spectrum() {
    let text = CString::new(E2).unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { gl11_spec_from_toml(text.as_ptr(), &mut spec) }, Gl11Status::Ok);
    assert_eq!(unsafe { gl11_spec_factors(spec) }, 2);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gl11_spec_to_toml(spec, &mut s) }, Gl11Status::Ok);
    assert_eq!(take(s), E2);

    assert_eq!(unsafe { gl11_spectrum_json(spec, -1, &mut s) }, Gl11Status::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["consistent"], true);
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    assert_eq!(v["levels"][1]["divisors"][0]["eigenvalue"], serde_json::json!(["-3/2", "2"]));

    unsafe { gl11_spec_free(spec) };
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("weights = [[1, 0]]\npoints = [\"0\"]\ntwist = [\"0\", \"1\"]\n").unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { gl11_spec_from_toml(bad.as_ptr(), &mut spec) }, Gl11Status::InvalidInput);
    assert!(spec.is_null());
    let msg = unsafe { CStr::from_ptr(gl11_last_error()) }.to_str().unwrap().to_owned();
    assert!(msg.contains("nonzero"), "{msg}");

    let junk = CString::new("weights = 3").unwrap();
    assert_eq!(unsafe { gl11_spec_from_toml(junk.as_ptr(), &mut spec) }, Gl11Status::Parse);
    assert_eq!(unsafe { gl11_spec_from_toml(ptr::null(), &mut spec) }, Gl11Status::NullPointer);
    assert_eq!(unsafe { gl11_spec_factors(ptr::null()) }, 0);
    unsafe { gl11_spec_free(ptr::null_mut()) };
    unsafe { gl11_string_free(ptr::null_mut()) };

    let mut s = ptr::null_mut();
    let suite = CString::new("nope").unwrap();
    assert_eq!(unsafe { gl11_verify_json(suite.as_ptr(), 0, 0, &mut s) }, Gl11Status::Parse);
}

#[test]
fn verify_and_random() {
    let suite = CString::new("rtt").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gl11_verify_json(suite.as_ptr(), 2, 2, &mut s) }, Gl11Status::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["pass"], true);

    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { gl11_spec_random(7, 2, 1, true, &mut a) }, Gl11Status::Ok);
    assert_eq!(unsafe { gl11_spec_random(7, 2, 1, true, &mut b) }, Gl11Status::Ok);
    let (mut ta, mut tb) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        gl11_spec_to_toml(a, &mut ta);
        gl11_spec_to_toml(b, &mut tb);
    }
    assert_eq!(take(ta), take(tb));
    unsafe {
        gl11_spec_free(a);
        gl11_spec_free(b);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gl11.h")).unwrap();
    for f in ["gl11_spec_from_toml", "gl11_spec_free", "gl11_spectrum_json", "gl11_verify_json", "gl11_string_free", "GL11_STATUS_OK"] {
        assert!(h.contains(f), "{f}");
    }
}

use std::ffi::{CStr, CString};
use std::ptr;

use patholab_ffi::*;

fn parse(text: &str) -> *mut PatholabFormula {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_formula_parse(c.as_ptr(), &mut f) },
        PatholabStatus::Ok
    );
    assert!(!f.is_null());
    f
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { patholab_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = patholab_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn parse_print_free() {
    let f = parse("not   (x in x)");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_formula_print(f, &mut s) },
        PatholabStatus::Ok
    );
    assert_eq!(take(s), "not (x in x)");
    unsafe { patholab_formula_free(f) };
    unsafe { patholab_formula_free(ptr::null_mut()) };
    unsafe { patholab_string_free(ptr::null_mut()) };
}

#[test]
fn parse_error_sets_message() {
    let c = CString::new("x in").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_formula_parse(c.as_ptr(), &mut f) },
        PatholabStatus::ParseError
    );
    assert!(f.is_null());
    assert!(last_error().is_some());
    let f = parse("x in x");
    assert!(last_error().is_none());
    unsafe { patholab_formula_free(f) };
}

#[test]
fn null_and_bad_utf8() {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_formula_parse(ptr::null(), &mut f) },
        PatholabStatus::NullPointer
    );
    assert_eq!(
        unsafe { patholab_formula_parse(c"x in x".as_ptr(), ptr::null_mut()) },
        PatholabStatus::NullPointer
    );
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { patholab_formula_parse(bad.as_ptr().cast(), &mut f) },
        PatholabStatus::InvalidUtf8
    );
    let mut v = PatholabVerdict::Unknown;
    assert_eq!(
        unsafe { patholab_patho_check(ptr::null(), ptr::null(), &mut v) },
        PatholabStatus::NullPointer
    );
}

#[test]
fn verdicts() {
    let cases = [
        ("not (x in x)", PatholabVerdict::ProvedPatho),
        ("x in x", PatholabVerdict::CertifiedNonPatho),
        ("Verum", PatholabVerdict::CertifiedNonPatho),
        ("not (x in f(x))", PatholabVerdict::Unsupported),
    ];
    let config = patholab_config_default();
    for (text, want) in cases {
        let f = parse(text);
        let mut v = PatholabVerdict::Unknown;
        assert_eq!(
            unsafe { patholab_patho_check(f, &config, &mut v) },
            PatholabStatus::Ok
        );
        assert_eq!(v, want, "{text}");
        unsafe { patholab_formula_free(f) };
    }
}

#[test]
fn too_many_free_variables() {
    let f = parse("x in y");
    let mut v = PatholabVerdict::Unknown;
    assert_eq!(
        unsafe { patholab_patho_check(f, ptr::null(), &mut v) },
        PatholabStatus::NotNearlyClosed
    );
    unsafe { patholab_formula_free(f) };
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_classify_json(c"x in y".as_ptr(), ptr::null(), &mut s) },
        PatholabStatus::NotNearlyClosed
    );
    let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert!(json["error"].is_string());
}

#[test]
fn stratification() {
    for (text, want) in [("not (x in x)", false), ("exists y: (y in x)", true)] {
        let f = parse(text);
        let mut b = !want;
        assert_eq!(
            unsafe { patholab_stratified(f, &mut b) },
            PatholabStatus::Ok
        );
        assert_eq!(b, want, "{text}");
        unsafe { patholab_formula_free(f) };
    }
}

#[test]
fn classify_json_report() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_classify_json(c"not (x in x)".as_ptr(), ptr::null(), &mut s) },
        PatholabStatus::Ok
    );
    let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(json["verdict"], "ProvedPatho");
}

#[test]
fn certificates() {
    let f = parse("Falsum");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_find_model(f, 3, &mut s) },
        PatholabStatus::Ok
    );
    assert_eq!(take(s), "size 1\n0\nden c0 0\n");
    unsafe { patholab_formula_free(f) };

    let f = parse("not (x in x)");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { patholab_find_model(f, 3, &mut s) },
        PatholabStatus::Ok
    );
    assert!(s.is_null());
    unsafe { patholab_formula_free(f) };

    let f = parse("not (x in f(x))");
    assert_eq!(
        unsafe { patholab_find_model(f, 3, &mut s) },
        PatholabStatus::Unsupported
    );
    unsafe { patholab_formula_free(f) };
}

#[test]
fn header_lists_every_export() {
    let header = include_str!("../include/patholab.h");
    for name in [
        "patholab_config_default",
        "patholab_formula_parse",
        "patholab_formula_free",
        "patholab_formula_print",
        "patholab_string_free",
        "patholab_classify_json",
        "patholab_patho_check",
        "patholab_stratified",
        "patholab_find_model",
        "patholab_last_error",
        "typedef struct PatholabFormula PatholabFormula;",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

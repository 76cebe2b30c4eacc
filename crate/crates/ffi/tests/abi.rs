use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mcfe_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mcfe_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn parse(text: &str) -> *mut McfeCircuit {
    let text = CString::new(text).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_parse(text.as_ptr(), &mut c) },
        McfeStatus::Ok
    );
    c
}

fn model(family: &str, n: usize, seed: u64) -> *mut McfeErrorModel {
    let f = CString::new(family).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_sample(f.as_ptr(), n, seed, &mut m) },
        McfeStatus::Ok
    );
    m
}

fn take_string(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { mcfe_string_free(s) };
    out
}

#[test]
fn circuit_round_trip_through_text() {
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_random(3, 4, 7, &mut c) },
        McfeStatus::Ok
    );
    let mut n = 0;
    assert_eq!(unsafe { mcfe_circuit_width(c, &mut n) }, McfeStatus::Ok);
    assert_eq!(n, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mcfe_circuit_to_text(c, &mut s) }, McfeStatus::Ok);
    let text = take_string(s);
    let d = parse(&text);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { mcfe_circuit_to_text(d, &mut s2) }, McfeStatus::Ok);
    assert_eq!(take_string(s2), text);
    unsafe {
        mcfe_circuit_free(c);
        mcfe_circuit_free(d);
    }
}

#[test]
fn errors_are_reported_with_messages() {
    let bad = CString::new("CIRCUIT n=2\nL foo(0)\n").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_parse(bad.as_ptr(), &mut c) },
        McfeStatus::ParseError
    );
    assert!(c.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { mcfe_circuit_parse(ptr::null(), &mut c) },
        McfeStatus::NullPointer
    );
    assert!(last_error().contains("null"));

    let fam = CString::new("nonsense").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_sample(fam.as_ptr(), 2, 1, &mut m) },
        McfeStatus::InvalidArgument
    );

    let mut v = 0.0;
    assert_eq!(
        unsafe { mcfe_chi_f(0.5, 0.0, 0.5, 2, &mut v) },
        McfeStatus::EstimateUndefined
    );
    assert_eq!(
        unsafe { mcfe_chi_f(0.5, 0.5, 0.5, 2, &mut v) },
        McfeStatus::Ok
    );
    assert!(last_error().is_empty());
    assert!((v - 1.0).abs() < 1e-12);

    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_random(40, 2, 1, &mut w) },
        McfeStatus::InvalidArgument
    );

    let c = parse("CIRCUIT n=1\nL c1(0;3)\n");
    let mut k = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_mirror_sample(c, 4, 0, &mut k) },
        McfeStatus::InvalidArgument
    );
    unsafe { mcfe_circuit_free(c) };
}

#[test]
fn noiseless_mirrors_hit_their_target() {
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_random(3, 3, 11, &mut c) },
        McfeStatus::Ok
    );
    for kind in 1..=3u8 {
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { mcfe_mirror_sample(c, kind, 99, &mut s) },
            McfeStatus::Ok
        );
        let mut mc = ptr::null_mut();
        let mut target = 0u64;
        assert_eq!(unsafe { mcfe_mirror_circuit(s, &mut mc) }, McfeStatus::Ok);
        assert_eq!(
            unsafe { mcfe_mirror_target(s, &mut target) },
            McfeStatus::Ok
        );
        let mut probs = vec![0.0; 8];
        assert_eq!(
            unsafe { mcfe_output_distribution(mc, ptr::null(), probs.as_mut_ptr(), probs.len()) },
            McfeStatus::Ok
        );
        assert!((probs[target as usize] - 1.0).abs() < 1e-10);
        unsafe {
            mcfe_circuit_free(mc);
            mcfe_mirror_sample_free(s);
        }
    }
    let mut short = vec![0.0; 4];
    assert_eq!(
        unsafe { mcfe_output_distribution(c, ptr::null(), short.as_mut_ptr(), short.len()) },
        McfeStatus::InvalidArgument
    );
    unsafe { mcfe_circuit_free(c) };
}

#[test]
fn depolarizing_estimate_matches_fidelity() {
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_random(2, 4, 3, &mut c) },
        McfeStatus::Ok
    );
    let m = model("depolarizing", 2, 5);
    let mut f = 0.0;
    assert_eq!(
        unsafe { mcfe_circuit_fidelity(c, m, &mut f) },
        McfeStatus::Ok
    );
    let mut est = McfeEstimate::default();
    assert_eq!(
        unsafe { mcfe_estimate_fidelity(c, m, 3, 0, 17, &mut est) },
        McfeStatus::Ok
    );
    assert!((est.chi_f - f).abs() < 1e-9);
    assert_eq!(est.out_of_range, 0);
    assert!(est.gamma.iter().all(|g| *g > 0.0 && *g <= 1.0));

    let mut shots = McfeEstimate::default();
    assert_eq!(
        unsafe { mcfe_estimate_fidelity(c, m, 20, 500, 17, &mut shots) },
        McfeStatus::Ok
    );
    assert!((shots.chi_f - f).abs() < 0.1);
    assert!(shots.bootstrap_sd > 0.0);
    unsafe {
        mcfe_error_model_free(m);
        mcfe_circuit_free(c);
    }
}

#[test]
fn error_model_json_round_trip() {
    let m = model("S", 3, 8);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_to_json(m, &mut s) },
        McfeStatus::Ok
    );
    let json = take_string(s);
    let cjson = CString::new(json.clone()).unwrap();
    let mut m2 = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_from_json(cjson.as_ptr(), &mut m2) },
        McfeStatus::Ok
    );
    let mut s2 = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_to_json(m2, &mut s2) },
        McfeStatus::Ok
    );
    assert_eq!(take_string(s2), json);
    let broken = CString::new("{").unwrap();
    let mut m3 = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_error_model_from_json(broken.as_ptr(), &mut m3) },
        McfeStatus::DataError
    );
    unsafe {
        mcfe_error_model_free(m);
        mcfe_error_model_free(m2);
    }
}

#[test]
fn qaoa_circuit_is_deterministic() {
    let text = |seed| {
        let mut c = ptr::null_mut();
        assert_eq!(
            unsafe { mcfe_circuit_qaoa(4, 2, 0.5, seed, &mut c) },
            McfeStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { mcfe_circuit_to_text(c, &mut s) }, McfeStatus::Ok);
        unsafe { mcfe_circuit_free(c) };
        take_string(s)
    };
    assert_eq!(text(4), text(4));
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { mcfe_circuit_qaoa(1, 2, 0.5, 0, &mut c) },
        McfeStatus::InvalidArgument
    );
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        mcfe_circuit_free(ptr::null_mut());
        mcfe_error_model_free(ptr::null_mut());
        mcfe_mirror_sample_free(ptr::null_mut());
        mcfe_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(mcfe_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mcfe.h")).unwrap();
    for name in [
        "MCFE_STATUS_OK",
        "MCFE_STATUS_PANIC",
        "typedef struct McfeCircuit McfeCircuit",
        "McfeEstimate",
        "mcfe_circuit_parse",
        "mcfe_estimate_fidelity",
        "mcfe_last_error_message",
        "mcfe_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

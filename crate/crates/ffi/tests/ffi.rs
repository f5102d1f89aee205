use std::ffi::{CStr, CString};
use std::ptr;

use qcoherence_ffi::*;

fn last_error() -> String {
    let p = qc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn reference() -> *mut QcState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qc_state_reference_example(&mut s) }, QcStatus::Ok);
    s
}

#[test]
fn reference_state_bound_round_trip() {
    unsafe {
        let s = reference();
        let mut n = 0;
        assert_eq!(qc_state_num_qubits(s, &mut n), QcStatus::Ok);
        assert_eq!(n, 3);
        let mut c = 0.0;
        assert_eq!(qc_state_coherence(s, &mut c), QcStatus::Ok);
        assert!((c - 2.2).abs() < 1e-12);

        let mut report = ptr::null_mut();
        assert_eq!(qc_best_bound(s, 2.0, 1.0, 1e-9, &mut report), QcStatus::Ok);
        let mut summary = std::mem::zeroed::<QcBoundSummary>();
        assert_eq!(qc_report_summary(report, &mut summary), QcStatus::Ok);
        assert_eq!(summary.m, 1);
        assert!((summary.k - 0.6).abs() < 1e-12);
        assert!((summary.rhs_theorem - 64.0 / 25.0).abs() < 1e-12);
        assert!((summary.rhs_baseline_k1 - 52.0 / 25.0).abs() < 1e-12);
        assert!((summary.lhs - 121.0 / 25.0).abs() < 1e-12);
        assert!(summary.conditions_met);

        let (mut steps, mut failed) = (0, 1);
        assert_eq!(
            qc_verify_chain(s, report, 1e-9, &mut steps, &mut failed),
            QcStatus::Ok
        );
        assert_eq!((steps, failed), (7, 0));

        let mut json = ptr::null_mut();
        assert_eq!(qc_report_to_json(report, &mut json), QcStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["m"], 1);
        qc_string_free(json);
        qc_report_free(report);
        qc_state_free(s);
    }
}

#[test]
fn partial_trace_and_json() {
    unsafe {
        let s = reference();
        let keep = [1usize, 2];
        let mut red = ptr::null_mut();
        assert_eq!(
            qc_state_partial_trace(s, keep.as_ptr(), keep.len(), &mut red),
            QcStatus::Ok
        );
        let mut c = 0.0;
        assert_eq!(qc_state_coherence(red, &mut c), QcStatus::Ok);
        assert!((c - 0.6).abs() < 1e-12);

        let mut json = ptr::null_mut();
        assert_eq!(qc_state_to_json(red, &mut json), QcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qc_state_from_json(json, &mut back), QcStatus::Ok);
        let mut n = 0;
        assert_eq!(qc_state_num_qubits(back, &mut n), QcStatus::Ok);
        assert_eq!(n, 2);

        let bad = [2usize, 1];
        let mut none = ptr::null_mut();
        assert_eq!(
            qc_state_partial_trace(s, bad.as_ptr(), bad.len(), &mut none),
            QcStatus::InvalidArgument
        );
        assert!(none.is_null());
        assert!(last_error().contains("increasing"), "{}", last_error());

        qc_string_free(json);
        qc_state_free(back);
        qc_state_free(red);
        qc_state_free(s);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut s = ptr::null_mut();
        let malformed = CString::new(r#"{"amplitudes": [[1.0, 0.0]"#).unwrap();
        assert_eq!(
            qc_state_from_json(malformed.as_ptr(), &mut s),
            QcStatus::Parse
        );
        assert!(last_error().contains("parse"));

        let unnormalized = CString::new(r#"{"amplitudes": [[1.0, 0.0], [1.0, 0.0]]}"#).unwrap();
        assert_eq!(
            qc_state_from_json(unnormalized.as_ptr(), &mut s),
            QcStatus::Validation
        );

        assert_eq!(
            qc_state_from_json(ptr::null(), &mut s),
            QcStatus::NullPointer
        );
        assert!(s.is_null());

        let mut f = 0.0;
        assert_eq!(
            qc_lemma2_factor(1.5, 2.0, &mut f),
            QcStatus::InvalidArgument
        );
        assert_eq!(qc_lemma2_factor(0.6, 2.0, &mut f), QcStatus::Ok);
        assert!(qc_last_error_message().is_null());
        assert!((f - 39.0 / 9.0).abs() < 1e-12);
        assert_eq!(
            qc_lemma2_factor(0.6, 2.0, ptr::null_mut()),
            QcStatus::NullPointer
        );

        assert_eq!(qc_state_haar(20, 1, 0, &mut s), QcStatus::SizeLimit);

        let mut two = ptr::null_mut();
        assert_eq!(qc_state_haar(2, 1, 0, &mut two), QcStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(
            qc_best_bound(two, 2.0, 1.0, 1e-9, &mut report),
            QcStatus::InvalidArgument
        );
        qc_state_free(two);

        qc_state_free(ptr::null_mut());
        qc_report_free(ptr::null_mut());
        qc_string_free(ptr::null_mut());
    }
}

#[test]
fn samplers_are_deterministic() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qc_state_ginibre(3, 0, 11, 4, &mut a), QcStatus::Ok);
        assert_eq!(qc_state_ginibre(3, 0, 11, 4, &mut b), QcStatus::Ok);
        let (mut ja, mut jb) = (ptr::null_mut(), ptr::null_mut());
        qc_state_to_json(a, &mut ja);
        qc_state_to_json(b, &mut jb);
        assert_eq!(CStr::from_ptr(ja), CStr::from_ptr(jb));
        assert_eq!(
            qc_state_ginibre(3, 9, 11, 4, &mut b),
            QcStatus::InvalidArgument
        );
        qc_string_free(ja);
        qc_string_free(jb);
        qc_state_free(a);
        qc_state_free(b);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/qcoherence.h");
    let source = include_str!("../src/lib.rs");
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in [
        "typedef struct QcState QcState;",
        "typedef struct QcReport QcReport;",
        "QC_STATUS_PANIC = 9",
    ] {
        assert!(header.contains(ty), "{ty}");
    }
}

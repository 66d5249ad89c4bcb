use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use qangle_ffi::*;

fn c(re: f64, im: f64) -> QaComplex {
    QaComplex { re, im }
}

fn state(amps: &[QaComplex]) -> *mut QaState {
    let mut out = ptr::null_mut();
    let status = unsafe { qa_state_new(amps.as_ptr(), amps.len(), &mut out) };
    assert_eq!(status, QaStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qa_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn pauli_z() -> *mut QaGenerator {
    let mut g = ptr::null_mut();
    let values = [1.0, -1.0];
    assert_eq!(
        unsafe { qa_generator_diagonal(values.as_ptr(), 2, &mut g) },
        QaStatus::Ok
    );
    g
}

#[test]
fn angle_between_handles() {
    let x = state(&[c(1.0, 0.0), c(0.0, 0.0)]);
    let y = state(&[c(0.0, 0.0), c(0.0, 3.0)]);
    let mut angle = -1.0;
    let mut differ = false;
    unsafe {
        assert_eq!(qa_quantum_angle(x, y, &mut angle), QaStatus::Ok);
        assert_eq!(qa_differ_substantially(x, y, &mut differ), QaStatus::Ok);
        assert_eq!(qa_quantum_angle(x, x, &mut angle), QaStatus::Ok);
    }
    assert!(differ);
    assert_eq!(angle, 0.0);
    unsafe {
        qa_quantum_angle(x, y, &mut angle);
        qa_state_free(x);
        qa_state_free(y);
    }
    assert!((angle - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn amplitudes_are_normalized_on_entry() {
    let s = state(&[c(3.0, 0.0), c(0.0, 4.0)]);
    let mut out = [c(0.0, 0.0); 2];
    unsafe {
        assert_eq!(qa_state_dim(s), 2);
        assert_eq!(qa_state_amplitudes(s, out.as_mut_ptr(), 2), QaStatus::Ok);
        assert_eq!(
            qa_state_amplitudes(s, out.as_mut_ptr(), 3),
            QaStatus::DimensionMismatch
        );
        qa_state_free(s);
    }
    assert!((out[0].re - 0.6).abs() < 1e-15);
    assert!((out[1].im - 0.8).abs() < 1e-15);
}

#[test]
fn errors_set_status_and_message() {
    let mut out = ptr::null_mut();
    let zero = [c(0.0, 0.0)];
    unsafe {
        assert_eq!(
            qa_state_new(zero.as_ptr(), 1, &mut out),
            QaStatus::NotNormalized
        );
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            qa_state_new(ptr::null(), 2, &mut out),
            QaStatus::NullPointer
        );
        assert!(last_error().contains("amplitudes"));

        let mut angle = 0.0;
        assert_eq!(
            qa_quantum_angle(ptr::null(), ptr::null(), &mut angle),
            QaStatus::NullPointer
        );

        let a = state(&[c(1.0, 0.0)]);
        let b = state(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(
            qa_quantum_angle(a, b, &mut angle),
            QaStatus::DimensionMismatch
        );
        assert!(last_error().contains("dimension"));
        assert_eq!(qa_quantum_angle(a, a, &mut angle), QaStatus::Ok);
        assert!(last_error().is_empty());
        qa_state_free(a);
        qa_state_free(b);

        let skew = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let mut g = ptr::null_mut();
        assert_eq!(
            qa_generator_new(skew.as_ptr(), 2, &mut g),
            QaStatus::NotHermitian
        );
        assert!(g.is_null());

        qa_state_free(ptr::null_mut());
        qa_generator_free(ptr::null_mut());
        assert_eq!(qa_state_dim(ptr::null()), 0);
    }
}

#[test]
fn two_level_dynamics() {
    let g = pauli_z();
    let h = FRAC_1_SQRT_2;
    let psi = state(&[c(h, 0.0), c(h, 0.0)]);
    unsafe {
        let mut stats = QaOrbitStats {
            mean: f64::NAN,
            std_dev: f64::NAN,
            omega: f64::NAN,
        };
        assert_eq!(qa_orbit_stats(g, 2.0, psi, &mut stats), QaStatus::Ok);
        assert!(stats.mean.abs() < 1e-15);
        assert!((stats.std_dev - 1.0).abs() < 1e-15);
        assert!((stats.omega - 0.5).abs() < 1e-15);

        let mut moved = ptr::null_mut();
        assert_eq!(qa_evolve(g, 1.0, psi, 0.3, &mut moved), QaStatus::Ok);
        let mut angle = 0.0;
        qa_quantum_angle(psi, moved, &mut angle);
        assert!((angle - 0.3).abs() < 1e-12);
        qa_state_free(moved);

        let mut shift = 0.0;
        let mut found = false;
        assert_eq!(
            qa_minimal_substantial_shift(g, 1.0, psi, 10.0, &mut shift, &mut found),
            QaStatus::Ok
        );
        assert!(found);
        assert!((shift - 1.0).abs() < 1e-9);

        let mut report = QaBoundReport {
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            tolerance: 0.0,
            holds: false,
            vacuous: true,
        };
        assert_eq!(
            qa_certainty_verdict(g, 1.0, psi, 1.2, &mut report),
            QaStatus::Ok
        );
        assert!(report.holds && !report.vacuous);
        assert!((report.rhs - 1.2).abs() < 1e-12);
        qa_certainty_verdict(g, 1.0, psi, 0.5, &mut report);
        assert!(report.holds && report.vacuous);

        assert_eq!(
            qa_orbit_stats(g, 0.0, psi, &mut stats),
            QaStatus::InvalidArgument
        );
        qa_state_free(psi);
        qa_generator_free(g);
    }
}

#[test]
fn eigenstate_never_moves() {
    let g = pauli_z();
    let e = state(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let mut shift = -1.0;
    let mut found = true;
    unsafe {
        assert_eq!(
            qa_minimal_substantial_shift(g, 1.0, e, 100.0, &mut shift, &mut found),
            QaStatus::Ok
        );
        qa_state_free(e);
        qa_generator_free(g);
    }
    assert!(!found);
    assert_eq!(shift, -1.0);
}

#[test]
fn dense_generator_and_random_state() {
    // σ_y
    let entries = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
    let mut g = ptr::null_mut();
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(qa_generator_new(entries.as_ptr(), 2, &mut g), QaStatus::Ok);
        assert_eq!(qa_generator_dim(g), 2);
        assert_eq!(qa_state_random(2, 42, &mut a), QaStatus::Ok);
        assert_eq!(qa_state_random(2, 42, &mut b), QaStatus::Ok);
        let mut angle = 1.0;
        qa_quantum_angle(a, b, &mut angle);
        assert!(angle < 1e-7);

        let mut stats = QaOrbitStats {
            mean: 0.0,
            std_dev: 0.0,
            omega: 0.0,
        };
        assert_eq!(qa_orbit_stats(g, 1.0, a, &mut stats), QaStatus::Ok);
        assert!(stats.std_dev <= 1.0 + 1e-12);

        assert_eq!(qa_state_random(0, 1, &mut b), QaStatus::InvalidArgument);
        qa_state_free(a);
        qa_generator_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qa_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qangle.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for name in [
        "QaState",
        "QaGenerator",
        "QA_STATUS_OK",
        "qa_quantum_angle",
        "qa_certainty_verdict",
        "qa_last_error_message",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler, skipping syntax check");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

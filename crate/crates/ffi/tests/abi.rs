use std::ffi::{CStr, CString};
use std::ptr;

use harmonic_ffi::*;

fn new_family(n: u32, frame: u32, param: f64) -> *mut HpFamily {
    let mut fam = ptr::null_mut();
    let s = unsafe { hp_family_new(n, frame, param, &mut fam) };
    assert_eq!(s, HpStatus::Ok);
    assert!(!fam.is_null());
    fam
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hp_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn version_and_status_strings() {
    let v = unsafe { CStr::from_ptr(hp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let s = unsafe { CStr::from_ptr(hp_status_string(HpStatus::BufferTooSmall)) };
    assert_eq!(s.to_str().unwrap(), "buffer too small");
}

#[test]
fn vertices_lie_on_unit_circle_in_casey_frame() {
    let fam = new_family(5, HP_FRAME_CASEY, 0.4);
    let mut n = 0;
    assert_eq!(unsafe { hp_family_vertex_count(fam, &mut n) }, HpStatus::Ok);
    assert_eq!(n, 5);
    let mut buf = [HpPoint::default(); 5];
    assert_eq!(
        unsafe { hp_family_vertices(fam, 0.2, buf.as_mut_ptr(), buf.len()) },
        HpStatus::Ok
    );
    for p in buf {
        assert!((p.x.hypot(p.y) - 1.0).abs() < 1e-12);
    }
    unsafe { hp_family_free(fam) };
}

#[test]
fn short_buffer_is_reported() {
    let fam = new_family(6, HP_FRAME_INVERSIVE, 0.3);
    let mut buf = [HpPoint::default(); 3];
    let s = unsafe { hp_family_vertices(fam, 0.0, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(s, HpStatus::BufferTooSmall);
    assert!(last_error().contains("6 needed"));
    unsafe { hp_family_free(fam) };
}

#[test]
fn invalid_arguments() {
    let mut fam = ptr::null_mut();
    assert_eq!(
        unsafe { hp_family_new(2, HP_FRAME_CASEY, 0.1, &mut fam) },
        HpStatus::InvalidArgument
    );
    assert!(fam.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { hp_family_new(4, 7, 0.1, &mut fam) },
        HpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hp_family_new(4, HP_FRAME_CASEY, 1.5, &mut fam) },
        HpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hp_family_new(4, HP_FRAME_CASEY, f64::NAN, &mut fam) },
        HpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hp_family_new(4, HP_FRAME_CASEY, 0.1, ptr::null_mut()) },
        HpStatus::NullPointer
    );
}

#[test]
fn null_handles_are_rejected() {
    let mut out = 0.0;
    let s = unsafe { hp_family_closure_residual(ptr::null(), 0.0, &mut out) };
    assert_eq!(s, HpStatus::NullPointer);
    unsafe { hp_family_free(ptr::null_mut()) };
}

#[test]
fn brocard_angle_is_stationary() {
    let fam = new_family(7, HP_FRAME_CASEY, 0.5);
    let mut b = HpBrocard::default();
    assert_eq!(unsafe { hp_family_brocard(fam, &mut b) }, HpStatus::Ok);
    assert_eq!(b.has_pencil, 1);
    assert!((b.circumradius - 1.0).abs() < 1e-12);
    for t in [0.0, 0.1, 0.37] {
        let mut w = 0.0;
        assert_eq!(
            unsafe { hp_family_brocard_angle_measured(fam, t, &mut w) },
            HpStatus::Ok
        );
        assert!((w - b.brocard_angle).abs() < 1e-10);
        let mut r = 1.0;
        assert_eq!(
            unsafe { hp_family_closure_residual(fam, t, &mut r) },
            HpStatus::Ok
        );
        assert!(r < 1e-10);
    }
    unsafe { hp_family_free(fam) };
}

#[test]
fn regular_polygon_has_no_pencil() {
    let fam = new_family(4, HP_FRAME_CASEY, 0.0);
    let mut b = HpBrocard::default();
    assert_eq!(unsafe { hp_family_brocard(fam, &mut b) }, HpStatus::Ok);
    assert_eq!(b.has_pencil, 0);
    assert!((b.brocard_angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    unsafe { hp_family_free(fam) };
}

#[test]
fn invariant_sweep() {
    let fam = new_family(5, HP_FRAME_CASEY, 0.3);
    let mut out = HpInvariantSummary {
        mean: 0.0,
        max_abs_dev: 0.0,
        relative_dev: 0.0,
        closed_form: 0.0,
        verdict: HpVerdict::Inconclusive,
    };
    let q = CString::new("sum-inv-sq-sides").unwrap();
    assert_eq!(
        unsafe { hp_family_invariant(fam, q.as_ptr(), 64, &mut out) },
        HpStatus::Ok
    );
    assert_eq!(out.verdict, HpVerdict::Invariant);
    assert!((out.mean - out.closed_form).abs() < 1e-9 * out.closed_form);

    let q = CString::new("elemsym:5").unwrap();
    assert_eq!(
        unsafe { hp_family_invariant(fam, q.as_ptr(), 64, &mut out) },
        HpStatus::Ok
    );
    assert_eq!(out.verdict, HpVerdict::Varies);

    let q = CString::new("no-such-quantity").unwrap();
    assert_eq!(
        unsafe { hp_family_invariant(fam, q.as_ptr(), 64, &mut out) },
        HpStatus::InvalidArgument
    );
    unsafe { hp_family_free(fam) };
}

#[test]
fn omega_prime_on_brocard_circle_is_constant() {
    let fam = new_family(5, HP_FRAME_CASEY, 0.4);
    let mut b = HpBrocard::default();
    unsafe { hp_family_brocard(fam, &mut b) };
    let q = (b.brocard_center.x, b.brocard_center.y + b.brocard_radius);
    let mut w = [0.0; 2];
    for (i, t) in [0.05, 0.9].into_iter().enumerate() {
        assert_eq!(
            unsafe { hp_family_omega_prime(fam, t, q.0, q.1, &mut w[i]) },
            HpStatus::Ok
        );
    }
    assert!((w[0] - w[1]).abs() < 1e-8);
    unsafe { hp_family_free(fam) };
}

#[test]
fn lateral_areas_match_reference() {
    let mut out = HpLateralAreas::default();
    assert_eq!(
        unsafe { hp_lateral_areas(3, 2.0, 1.0, 0.4, &mut out) },
        HpStatus::Ok
    );
    assert!((out.inv_sum - (1.0 / out.a1 + 1.0 / out.a2)).abs() < 1e-12);
    assert!((out.inv_sum - 1.34715).abs() < 1e-5);
    assert_eq!(
        unsafe { hp_lateral_areas(3, -1.0, 2.0, 0.4, &mut out) },
        HpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { hp_lateral_areas(2, 2.0, 1.0, 0.4, &mut out) },
        HpStatus::InvalidArgument
    );
}

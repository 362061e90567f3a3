use std::ffi::{CStr, CString};
use std::ptr;

use feedsec_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fs_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn entropy_and_inverse() {
    let mut h = 0.0;
    assert_eq!(unsafe { fs_binary_entropy(0.11, &mut h) }, FsStatus::Ok);
    let mut p = 0.0;
    assert_eq!(
        unsafe { fs_binary_entropy_inverse(h, &mut p) },
        FsStatus::Ok
    );
    assert!((p - 0.11).abs() < 1e-9);

    assert_eq!(
        unsafe { fs_binary_entropy(1.5, &mut h) },
        FsStatus::InvalidArgument
    );
    assert!(last_error().contains("1.5"), "{}", last_error());
    assert_eq!(
        unsafe { fs_binary_entropy(0.5, ptr::null_mut()) },
        FsStatus::NullPointer
    );
}

#[test]
fn bsc_handle_lifecycle() {
    let mut sys = ptr::null_mut();
    let d = 0.110_027_864_368_319_3;
    assert_eq!(
        unsafe { fs_bsc_system_new(0.0, d, 0.0, d, &mut sys) },
        FsStatus::Ok
    );
    assert!(!sys.is_null());
    let mut b = FsRateBreakdown::default();
    assert_eq!(unsafe { fs_bsc_optimize_alpha(sys, &mut b) }, FsStatus::Ok);
    assert!((b.total - 1.0).abs() < 1e-3);
    assert_eq!(
        unsafe { fs_bsc_rate_breakdown(sys, 2.0, &mut b) },
        FsStatus::InvalidArgument
    );
    let mut k = 0.0;
    assert_eq!(
        unsafe { fs_bsc_backward_key_capacity(sys, &mut k) },
        FsStatus::Ok
    );
    assert!((k - 0.5).abs() < 1e-6);
    unsafe { fs_bsc_system_free(sys) };
    unsafe { fs_bsc_system_free(ptr::null_mut()) };

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { fs_bsc_system_new(-0.1, 0.1, 0.0, 0.1, &mut bad) },
        FsStatus::InvalidArgument
    );
    assert!(bad.is_null());
    assert_eq!(
        unsafe { fs_bsc_optimize_alpha(ptr::null(), &mut b) },
        FsStatus::NullPointer
    );
}

#[test]
fn maurer_and_no_feedback() {
    let mut r = FsMaurerResult::default();
    assert_eq!(
        unsafe { fs_maurer_simulate(0.11, 0.11, 100_000, 1, &mut r) },
        FsStatus::Ok
    );
    assert!((r.expected_eve - 0.1958).abs() < 1e-12);
    assert!((r.eve_ber - 0.1958).abs() < 0.01);
    let mut c = 0.0;
    assert_eq!(
        unsafe { fs_bsc_no_feedback_capacity(0.2, 0.1, &mut c) },
        FsStatus::Ok
    );
    assert_eq!(c, 0.0);
}

#[test]
fn region_from_json() {
    let json = CString::new(
        r#"{"p_vb":[1.0],"ch_xb_given_vb":[[1.0]],"ch_yz_b":[[[1.0]]],
            "p_uf":[1.0],"ch_vf_given_uf":[[0.5,0.5]],"ch_xf_given_vf":[[1,0],[0,1]],
            "ch_yz_f":[[[0.0,1.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
    )
    .unwrap();
    let mut r = FsRegionResult::default();
    assert_eq!(
        unsafe { fs_region_eval_json(json.as_ptr(), &mut r) },
        FsStatus::Ok
    );
    // Bob noiseless, Eve sees an inverted copy: nothing is secret.
    assert!(r.rate.abs() < 1e-12);
    assert!((r.term_direct - 1.0).abs() < 1e-12);

    let bad = CString::new("{").unwrap();
    assert_eq!(
        unsafe { fs_region_eval_json(bad.as_ptr(), &mut r) },
        FsStatus::ParseError
    );
    assert_eq!(
        unsafe { fs_region_eval_json(ptr::null(), &mut r) },
        FsStatus::NullPointer
    );
}

#[test]
fn gaussian_functions() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { fs_gaussian_params_new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, &mut p) },
        FsStatus::Ok
    );
    let mut cf = 0.0;
    assert_eq!(
        unsafe { fs_gaussian_capacity_forward(p, &mut cf) },
        FsStatus::Ok
    );
    assert!((cf - 0.5).abs() < 1e-15);
    let mut cs = 1.0;
    assert_eq!(
        unsafe { fs_gaussian_secrecy_capacity_no_feedback(p, &mut cs) },
        FsStatus::Ok
    );
    assert_eq!(cs, 0.0);
    let mut lb = FsLeakageBound::default();
    assert_eq!(
        unsafe { fs_gaussian_leakage_bound(p, 4, &mut lb) },
        FsStatus::Ok
    );
    assert!((lb.one_shot_bits - 0.5 * (4.0f64 / 3.0).log2()).abs() < 1e-12);
    assert!((4.0 * lb.per_symbol_bits - lb.one_shot_bits).abs() < 1e-15);
    let mut v = 0.0;
    assert_eq!(
        unsafe { fs_sk_error_variance_theory(p, 3, &mut v) },
        FsStatus::Ok
    );
    assert!((v - 0.125).abs() < 1e-15);
    let mut mc = FsSkMonteCarlo::default();
    assert_eq!(
        unsafe { fs_sk_monte_carlo(p, 4, 2, 9, 2000, &mut mc) },
        FsStatus::Ok
    );
    assert_eq!(mc.trials, 2000);
    assert!((mc.theory_error_variance - 1.0 / 16.0).abs() < 1e-15);
    assert!((mc.empirical_error_variance - 1.0 / 16.0).abs() < 5.0 * mc.variance_standard_error);
    assert_eq!(
        unsafe { fs_sk_monte_carlo(p, 4, 2, 9, 0, &mut mc) },
        FsStatus::InvalidArgument
    );
    unsafe { fs_gaussian_params_free(p) };

    let mut singular = ptr::null_mut();
    assert_eq!(
        unsafe { fs_gaussian_params_new(1.0, 1.0, 1.0, 1.0, -0.5, -0.5, -0.5, &mut singular) },
        FsStatus::Ok
    );
    assert_eq!(
        unsafe { fs_gaussian_leakage_bound(singular, 4, &mut lb) },
        FsStatus::Degenerate
    );
    assert!(last_error().contains("c2"));
    unsafe { fs_gaussian_params_free(singular) };

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { fs_gaussian_params_new(-1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, &mut bad) },
        FsStatus::InvalidArgument
    );
    assert!(bad.is_null());
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/feedsec.h")).unwrap();
    for name in [
        "fs_last_error",
        "fs_binary_entropy",
        "fs_bsc_system_new",
        "fs_bsc_system_free",
        "fs_bsc_optimize_alpha",
        "fs_region_eval_json",
        "fs_gaussian_params_new",
        "fs_sk_monte_carlo",
        "typedef struct FsBscSystem FsBscSystem",
        "FS_STATUS_DEGENERATE = 3",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

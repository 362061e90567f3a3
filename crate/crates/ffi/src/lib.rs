//! C ABI over `feedsec`.
//!
//! Every entry point returns an [`FsStatus`] and writes its result through
//! an out-pointer. Systems and parameter sets are opaque handles created by
//! `*_new` and released by the matching `*_free`. After a non-OK status,
//! [`fs_last_error`] returns a message for the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use feedsec::bsc::{self, BscSystem};
use feedsec::gaussian::{self, GaussianWiretapParams, SkConfig};
use feedsec::info_theory;
use feedsec::region::{theorem1_rate, FeedbackSystemSpec};
use feedsec::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    ParseError = 4,
    IoError = 5,
    Panic = 6,
}

/// Opaque binary symmetric system.
pub struct FsBscSystem(BscSystem);

/// Opaque Gaussian wiretap parameter set.
pub struct FsGaussianParams(GaussianWiretapParams);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FsRateBreakdown {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub alpha: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FsMaurerResult {
    pub bob_ber: f64,
    pub eve_ber: f64,
    pub expected_bob: f64,
    pub expected_eve: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FsRegionResult {
    pub rate: f64,
    pub term_direct: f64,
    pub term_secrecy_sum: f64,
    pub constraint_ok: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FsLeakageBound {
    pub c1: f64,
    pub c2: f64,
    pub one_shot_bits: f64,
    pub per_symbol_bits: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FsSkMonteCarlo {
    pub trials: u64,
    pub error_count: u64,
    pub empirical_error_rate: f64,
    pub empirical_error_variance: f64,
    pub variance_standard_error: f64,
    pub theory_error_variance: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FsStatus {
    match e {
        Error::Degenerate(_) => FsStatus::Degenerate,
        Error::Parse(_) => FsStatus::ParseError,
        Error::Io(_) => FsStatus::IoError,
        _ => FsStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics into [`FsStatus::Panic`].
fn guard<F: FnOnce() -> Result<(), FsStatus>>(f: F) -> FsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("panic inside feedsec");
            FsStatus::Panic
        }
    }
}

fn check<T>(r: feedsec::Result<T>) -> Result<T, FsStatus> {
    r.map_err(|e| {
        set_last_error(&e.to_string());
        status_of(&e)
    })
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, FsStatus> {
    p.as_mut().ok_or_else(|| {
        set_last_error("null output pointer");
        FsStatus::NullPointer
    })
}

unsafe fn in_ref<'a, T>(p: *const T) -> Result<&'a T, FsStatus> {
    p.as_ref().ok_or_else(|| {
        set_last_error("null handle");
        FsStatus::NullPointer
    })
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; never NULL.
#[no_mangle]
pub extern "C" fn fs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn fs_binary_entropy(p: f64, out: *mut f64) -> FsStatus {
    guard(|| {
        *out_ref(out)? = check(info_theory::binary_entropy(p))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_binary_entropy_inverse(h: f64, out: *mut f64) -> FsStatus {
    guard(|| {
        *out_ref(out)? = check(info_theory::binary_entropy_inverse(h))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_system_new(
    eps_f: f64,
    del_f: f64,
    eps_b: f64,
    del_b: f64,
    out: *mut *mut FsBscSystem,
) -> FsStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let sys = check(BscSystem::new(eps_f, del_f, eps_b, del_b))?;
        *slot = Box::into_raw(Box::new(FsBscSystem(sys)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_system_free(sys: *mut FsBscSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

fn breakdown(b: bsc::RateBreakdown) -> FsRateBreakdown {
    FsRateBreakdown {
        r1: b.r1,
        r2: b.r2,
        r3: b.r3,
        alpha: b.alpha,
        total: b.total,
    }
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_rate_breakdown(
    sys: *const FsBscSystem,
    alpha: f64,
    out: *mut FsRateBreakdown,
) -> FsStatus {
    guard(|| {
        let sys = in_ref(sys)?;
        let out = out_ref(out)?;
        *out = breakdown(check(bsc::rate_breakdown(&sys.0, alpha))?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_optimize_alpha(
    sys: *const FsBscSystem,
    out: *mut FsRateBreakdown,
) -> FsStatus {
    guard(|| {
        let sys = in_ref(sys)?;
        *out_ref(out)? = breakdown(bsc::optimize_alpha(&sys.0));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_backward_key_capacity(
    sys: *const FsBscSystem,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        let sys = in_ref(sys)?;
        *out_ref(out)? = bsc::backward_key_capacity(&sys.0);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_bsc_no_feedback_capacity(
    eps: f64,
    del: f64,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        *out_ref(out)? = check(bsc::no_feedback_secrecy_capacity(eps, del))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_maurer_simulate(
    eps_b: f64,
    del_b: f64,
    n: u64,
    seed: u64,
    out: *mut FsMaurerResult,
) -> FsStatus {
    guard(|| {
        let out = out_ref(out)?;
        let r = check(bsc::simulate_maurer(eps_b, del_b, n, seed))?;
        *out = FsMaurerResult {
            bob_ber: r.bob_ber,
            eve_ber: r.eve_ber,
            expected_bob: r.expected_bob,
            expected_eve: r.expected_eve,
        };
        Ok(())
    })
}

/// Evaluates a system given as a NUL-terminated JSON document.
#[no_mangle]
pub unsafe extern "C" fn fs_region_eval_json(
    json: *const c_char,
    out: *mut FsRegionResult,
) -> FsStatus {
    guard(|| {
        let out = out_ref(out)?;
        if json.is_null() {
            set_last_error("null JSON string");
            return Err(FsStatus::NullPointer);
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| {
            set_last_error(&format!("JSON is not UTF-8: {e}"));
            FsStatus::ParseError
        })?;
        let spec = check(FeedbackSystemSpec::from_json(text))?;
        let r = check(theorem1_rate(&spec))?;
        *out = FsRegionResult {
            rate: r.rate,
            term_direct: r.term_direct,
            term_secrecy_sum: r.term_secrecy_sum,
            constraint_ok: r.constraint_ok,
        };
        Ok(())
    })
}

#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fs_gaussian_params_new(
    power: f64,
    var_n: f64,
    var_m: f64,
    var_s: f64,
    rho1: f64,
    rho2: f64,
    rho3: f64,
    out: *mut *mut FsGaussianParams,
) -> FsStatus {
    guard(|| {
        let slot = out_ref(out)?;
        *slot = ptr::null_mut();
        let p = check(GaussianWiretapParams::new(
            power, var_n, var_m, var_s, rho1, rho2, rho3,
        ))?;
        *slot = Box::into_raw(Box::new(FsGaussianParams(p)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_gaussian_params_free(params: *mut FsGaussianParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

#[no_mangle]
pub unsafe extern "C" fn fs_gaussian_capacity_forward(
    params: *const FsGaussianParams,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        let p = in_ref(params)?;
        *out_ref(out)? = gaussian::capacity_forward(&p.0);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_gaussian_secrecy_capacity_no_feedback(
    params: *const FsGaussianParams,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        let p = in_ref(params)?;
        *out_ref(out)? = gaussian::secrecy_capacity_no_feedback(&p.0);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_gaussian_leakage_bound(
    params: *const FsGaussianParams,
    n: usize,
    out: *mut FsLeakageBound,
) -> FsStatus {
    guard(|| {
        let p = in_ref(params)?;
        let out = out_ref(out)?;
        let b = check(gaussian::leakage_bound(&p.0, n))?;
        *out = FsLeakageBound {
            c1: b.c1,
            c2: b.c2,
            one_shot_bits: b.one_shot_bits,
            per_symbol_bits: b.per_symbol_bits,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_sk_error_variance_theory(
    params: *const FsGaussianParams,
    n: usize,
    out: *mut f64,
) -> FsStatus {
    guard(|| {
        let p = in_ref(params)?;
        let out = out_ref(out)?;
        let config = check(SkConfig::new(p.0, n, 2, 0))?;
        *out = gaussian::error_variance_theory(&config);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn fs_sk_monte_carlo(
    params: *const FsGaussianParams,
    n: usize,
    num_messages: u64,
    seed: u64,
    trials: u64,
    out: *mut FsSkMonteCarlo,
) -> FsStatus {
    guard(|| {
        let p = in_ref(params)?;
        let out = out_ref(out)?;
        let config = check(SkConfig::new(p.0, n, num_messages, seed))?;
        let r = check(gaussian::monte_carlo_sk(&config, trials))?;
        *out = FsSkMonteCarlo {
            trials: r.trials,
            error_count: r.error_count,
            empirical_error_rate: r.empirical_error_rate,
            empirical_error_variance: r.empirical_error_variance,
            variance_standard_error: r.variance_standard_error,
            theory_error_variance: r.theory_error_variance,
        };
        Ok(())
    })
}

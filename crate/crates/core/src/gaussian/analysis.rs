//! Closed-form capacities and the leakage bound for the SK scheme.

use serde::{Deserialize, Serialize};

use super::params::GaussianWiretapParams;
use super::sk::SkConfig;
use crate::error::{Error, Result};

/// `|c2|` at or below this is treated as a singular correlation structure.
pub const C2_DEGENERATE_TOL: f64 = 1e-10;

/// Capacity from Alice to Bob, `1/2 log2(1 + P / var_n)`.
pub fn capacity_forward(params: &GaussianWiretapParams) -> f64 {
    0.5 * (1.0 + params.power / params.var_n).log2()
}

/// Secrecy capacity without feedback,
/// `1/2 [log2(1 + P/var_n) - log2(1 + P/var_m)]^+`.
pub fn secrecy_capacity_no_feedback(params: &GaussianWiretapParams) -> f64 {
    let bob = (1.0 + params.power / params.var_n).log2();
    let eve = (1.0 + params.power / params.var_m).log2();
    0.5 * (bob - eve).max(0.0)
}

/// Bob's mean squared estimation error after `n` uses, `var_n / alpha^(2n)`.
pub fn error_variance_theory(config: &SkConfig) -> f64 {
    let alpha_sq = (config.params.power + config.params.var_n) / config.params.var_n;
    config.params.var_n / alpha_sq.powf(config.n as f64)
}

/// Variance assumed for the signal point `theta` in the leakage bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaVariance {
    /// `1/12`, the variance of a uniform point on a unit interval.
    Uniform,
    /// `(M^2 - 1) / (12 M^2)`, the exact variance over `M` midpoints.
    FiniteMessages(u64),
}

impl ThetaVariance {
    pub fn value(self) -> f64 {
        match self {
            ThetaVariance::Uniform => 1.0 / 12.0,
            ThetaVariance::FiniteMessages(m) => {
                let m = m as f64;
                (m * m - 1.0) / (12.0 * m * m)
            }
        }
    }
}

/// Gaussian upper bound on what Eve learns about `theta` from
/// `(alpha_1 theta + M_1, alpha_1 theta + S_1, N_1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageBound {
    pub c1: f64,
    pub c2: f64,
    pub alpha1_sq: f64,
    pub theta_variance: f64,
    /// Bound on the whole-block mutual information, in bits.
    pub one_shot_bits: f64,
    /// `one_shot_bits / n`.
    pub per_symbol_bits: f64,
    pub n: usize,
}

/// `c1 = 2 (rho3 - rho1 rho2) s_S s_M + (rho1^2 - 1) var_M + (rho2^2 - 1) var_S`.
pub fn leakage_c1(params: &GaussianWiretapParams) -> f64 {
    let (r1, r2, r3) = (params.rho1, params.rho2, params.rho3);
    2.0 * (r3 - r1 * r2) * params.var_s.sqrt() * params.var_m.sqrt()
        + (r1 * r1 - 1.0) * params.var_m
        + (r2 * r2 - 1.0) * params.var_s
}

/// `c2 = rho1^2 + rho2^2 + rho3^2 - 2 rho1 rho2 rho3 - 1`, minus the
/// determinant of the noise correlation matrix.
pub fn leakage_c2(params: &GaussianWiretapParams) -> f64 {
    let (r1, r2, r3) = (params.rho1, params.rho2, params.rho3);
    r1 * r1 + r2 * r2 + r3 * r3 - 2.0 * r1 * r2 * r3 - 1.0
}

/// Leakage bound with `Var(theta) = 1/12`.
pub fn leakage_bound(params: &GaussianWiretapParams, n: usize) -> Result<LeakageBound> {
    leakage_bound_with(params, n, ThetaVariance::Uniform)
}

/// `1/2 log2(1 + Var(theta) alpha_1^2 c1 / (var_S var_M c2))`, and the same
/// divided by `n`.
pub fn leakage_bound_with(
    params: &GaussianWiretapParams,
    n: usize,
    theta: ThetaVariance,
) -> Result<LeakageBound> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let c1 = leakage_c1(params);
    let c2 = leakage_c2(params);
    if c2.abs() <= C2_DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "c2 = {c2:e}: the noise correlation matrix is singular and the leakage bound is undefined"
        )));
    }
    let alpha1_sq = (params.power + params.var_n) / params.var_n;
    let theta_variance = theta.value();
    let arg = 1.0 + theta_variance * alpha1_sq * c1 / (params.var_s * params.var_m * c2);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::Degenerate(format!(
            "leakage log argument {arg} is not positive (c1 = {c1}, c2 = {c2})"
        )));
    }
    let one_shot_bits = 0.5 * arg.log2();
    Ok(LeakageBound {
        c1,
        c2,
        alpha1_sq,
        theta_variance,
        one_shot_bits,
        per_symbol_bits: one_shot_bits / n as f64,
        n,
    })
}

/// Capacities and the equivocation guarantee of the SK scheme at rate `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecySummary {
    pub c_f: f64,
    pub c_s_no_feedback: f64,
    /// Secrecy capacity with perfect feedback; equals `c_f`.
    pub c_sf: f64,
    pub rate: f64,
    pub n: usize,
    pub one_shot_leakage_bound: f64,
    pub per_symbol_leakage_bound: f64,
    /// `rate - per_symbol_leakage_bound`.
    pub equivocation_rate_lower_bound: f64,
}

pub fn secrecy_summary(
    params: &GaussianWiretapParams,
    n: usize,
    rate: f64,
) -> Result<SecrecySummary> {
    secrecy_summary_with(params, n, rate, ThetaVariance::Uniform)
}

pub fn secrecy_summary_with(
    params: &GaussianWiretapParams,
    n: usize,
    rate: f64,
    theta: ThetaVariance,
) -> Result<SecrecySummary> {
    let c_f = capacity_forward(params);
    if !(rate >= 0.0) || rate > c_f * (1.0 + 1e-12) {
        return Err(Error::domain("rate", rate, "[0, C_f]"));
    }
    let leak = leakage_bound_with(params, n, theta)?;
    Ok(SecrecySummary {
        c_f,
        c_s_no_feedback: secrecy_capacity_no_feedback(params),
        c_sf: c_f,
        rate,
        n,
        one_shot_leakage_bound: leak.one_shot_bits,
        per_symbol_leakage_bound: leak.per_symbol_bits,
        equivocation_rate_lower_bound: rate - leak.per_symbol_bits,
    })
}

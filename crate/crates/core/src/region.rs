//! Achievable secrecy rate for a discrete wiretap channel whose backward
//! link is used to generate a shared key.
//!
//! The full joint over `(V_b, X_b, Y_b, Z_b, U_f, V_f, X_f, Y_f, Z_f)` is
//! built from the chained factors of a [`FeedbackSystemSpec`] and every
//! mutual information is read off exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_theory::{
    conditional_mutual_information, mutual_information, Channel, JointPmf, Pmf,
};

// Axis layout of the joint built by `FeedbackSystemSpec::joint`:
// V_b X_b Y_b Z_b U_f V_f X_f Y_f Z_f.
const VB: usize = 0;
const YB: usize = 2;
const ZB: usize = 3;
const UF: usize = 4;
const VF: usize = 5;
const YF: usize = 7;
const ZF: usize = 8;

/// Tolerance on the auxiliary side condition `I(U_f; Z_f) >= I(U_f; Y_f)`.
const CONSTRAINT_TOL: f64 = 1e-12;

/// Distributions and channels of a wiretap system with a backward channel.
///
/// Forward chain `U_f -> V_f -> X_f -> (Y_f, Z_f)`, backward chain
/// `V_b -> X_b -> (Y_b, Z_b)`; the two are independent.
#[derive(Debug, Clone)]
pub struct FeedbackSystemSpec {
    pub p_vb: Pmf,
    pub ch_xb_given_vb: Channel,
    pub ch_yz_b: Channel,
    pub p_uf: Pmf,
    pub ch_vf_given_uf: Channel,
    pub ch_xf_given_vf: Channel,
    pub ch_yz_f: Channel,
}

/// Outcome of a rate-region evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionResult {
    /// `max(0, min(term_direct, term_secrecy_sum))`.
    pub rate: f64,
    /// `I(V_f; Y_f)`.
    pub term_direct: f64,
    /// `I(V_f;Y_f|U_f) - I(V_f;Z_f|U_f) + I(V_b;Y_b) - I(V_b;Z_b)`, unclamped.
    pub term_secrecy_sum: f64,
    /// Whether `I(U_f; Z_f) >= I(U_f; Y_f)` holds for the chosen auxiliaries.
    pub constraint_ok: bool,
}

impl FeedbackSystemSpec {
    /// Checks that every factor chains onto the previous one.
    pub fn validate(&self) -> Result<()> {
        let link = |name: &str, have: usize, want: usize| -> Result<()> {
            if have != want {
                Err(Error::InvalidDistribution(format!(
                    "{name}: expects {want} input symbols, previous stage has {have}"
                )))
            } else {
                Ok(())
            }
        };
        link(
            "ch_xb_given_vb",
            self.p_vb.len(),
            self.ch_xb_given_vb.input_size(),
        )?;
        single_output("ch_xb_given_vb", &self.ch_xb_given_vb)?;
        link(
            "ch_yz_b",
            self.ch_xb_given_vb.output_sizes()[0],
            self.ch_yz_b.input_size(),
        )?;
        two_outputs("ch_yz_b", &self.ch_yz_b)?;
        link(
            "ch_vf_given_uf",
            self.p_uf.len(),
            self.ch_vf_given_uf.input_size(),
        )?;
        single_output("ch_vf_given_uf", &self.ch_vf_given_uf)?;
        link(
            "ch_xf_given_vf",
            self.ch_vf_given_uf.output_sizes()[0],
            self.ch_xf_given_vf.input_size(),
        )?;
        single_output("ch_xf_given_vf", &self.ch_xf_given_vf)?;
        link(
            "ch_yz_f",
            self.ch_xf_given_vf.output_sizes()[0],
            self.ch_yz_f.input_size(),
        )?;
        two_outputs("ch_yz_f", &self.ch_yz_f)?;
        Ok(())
    }

    /// The nine-axis joint distribution induced by the factors.
    pub fn joint(&self) -> Result<JointPmf> {
        self.validate()?;
        let backward = JointPmf::new(vec![self.p_vb.len()], self.p_vb.probs().to_vec())?
            .extend(0, &self.ch_xb_given_vb)?
            .extend(1, &self.ch_yz_b)?;
        let forward = JointPmf::new(vec![self.p_uf.len()], self.p_uf.probs().to_vec())?
            .extend(0, &self.ch_vf_given_uf)?
            .extend(1, &self.ch_xf_given_vf)?
            .extend(2, &self.ch_yz_f)?;
        backward.product(&forward)
    }

    /// Parses the JSON form: pmfs as arrays, single-output channels as
    /// `[x][y]` arrays and broadcast channels as `[x][y][z]` arrays.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field =
            |name: &'static str| move |e: Error| Error::InvalidDistribution(format!("{name}: {e}"));
        let spec = FeedbackSystemSpec {
            p_vb: Pmf::new(raw.p_vb).map_err(field("p_vb"))?,
            ch_xb_given_vb: Channel::new(raw.ch_xb_given_vb).map_err(field("ch_xb_given_vb"))?,
            ch_yz_b: Channel::broadcast(raw.ch_yz_b).map_err(field("ch_yz_b"))?,
            p_uf: Pmf::new(raw.p_uf).map_err(field("p_uf"))?,
            ch_vf_given_uf: Channel::new(raw.ch_vf_given_uf).map_err(field("ch_vf_given_uf"))?,
            ch_xf_given_vf: Channel::new(raw.ch_xf_given_vf).map_err(field("ch_xf_given_vf"))?,
            ch_yz_f: Channel::broadcast(raw.ch_yz_f).map_err(field("ch_yz_f"))?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    p_vb: Vec<f64>,
    ch_xb_given_vb: Vec<Vec<f64>>,
    ch_yz_b: Vec<Vec<Vec<f64>>>,
    p_uf: Vec<f64>,
    ch_vf_given_uf: Vec<Vec<f64>>,
    ch_xf_given_vf: Vec<Vec<f64>>,
    ch_yz_f: Vec<Vec<Vec<f64>>>,
}

fn single_output(name: &str, ch: &Channel) -> Result<()> {
    if ch.output_sizes().len() != 1 {
        return Err(Error::InvalidDistribution(format!(
            "{name}: expected a single-output channel"
        )));
    }
    Ok(())
}

fn two_outputs(name: &str, ch: &Channel) -> Result<()> {
    if ch.output_sizes().len() != 2 {
        return Err(Error::InvalidDistribution(format!(
            "{name}: expected a channel with outputs (y, z)"
        )));
    }
    Ok(())
}

/// Evaluates `min{I(V_f;Y_f), I(V_f;Y_f|U_f) - I(V_f;Z_f|U_f) + I(V_b;Y_b) - I(V_b;Z_b)}`
/// clamped at zero. The side condition on `U_f` is reported, not enforced.
pub fn theorem1_rate(spec: &FeedbackSystemSpec) -> Result<RegionResult> {
    let j = spec.joint()?;
    let term_direct = mutual_information(&j, &[VF], &[YF])?;
    let forward_adv = conditional_mutual_information(&j, &[VF], &[YF], &[UF])?
        - conditional_mutual_information(&j, &[VF], &[ZF], &[UF])?;
    let backward_adv =
        mutual_information(&j, &[VB], &[YB])? - mutual_information(&j, &[VB], &[ZB])?;
    let term_secrecy_sum = forward_adv + backward_adv;
    let constraint_ok = mutual_information(&j, &[UF], &[ZF])? + CONSTRAINT_TOL
        >= mutual_information(&j, &[UF], &[YF])?;
    Ok(RegionResult {
        rate: term_direct.min(term_secrecy_sum).max(0.0),
        term_direct,
        term_secrecy_sum,
        constraint_ok,
    })
}

/// `min{I(X_f;Y_f), I(X_f;Y_f) - I(X_f;Z_f) + I(X_b;Y_b) - I(X_b;Z_b)}`, clamped at zero.
pub fn corollary1_rate(
    p_xf: &Pmf,
    ch_yz_f: &Channel,
    p_xb: &Pmf,
    ch_yz_b: &Channel,
) -> Result<f64> {
    two_outputs("ch_yz_f", ch_yz_f)?;
    two_outputs("ch_yz_b", ch_yz_b)?;
    let f = JointPmf::from_input(p_xf, ch_yz_f)?;
    let b = JointPmf::from_input(p_xb, ch_yz_b)?;
    let i_fy = mutual_information(&f, &[0], &[1])?;
    let i_fz = mutual_information(&f, &[0], &[2])?;
    let i_by = mutual_information(&b, &[0], &[1])?;
    let i_bz = mutual_information(&b, &[0], &[2])?;
    Ok(i_fy.min(i_fy - i_fz + i_by - i_bz).max(0.0))
}

/// Key rate `min{[I(V_b;Y_b) - I(V_b;Z_b)]^+, I(X_f;Z_f)}` from the backward channel.
pub fn key_rate(
    p_vb: &Pmf,
    ch_xb_given_vb: &Channel,
    ch_yz_b: &Channel,
    i_xf_zf: f64,
) -> Result<f64> {
    if !(i_xf_zf >= 0.0) || !i_xf_zf.is_finite() {
        return Err(Error::domain("i_xf_zf", i_xf_zf, "[0, inf)"));
    }
    single_output("ch_xb_given_vb", ch_xb_given_vb)?;
    two_outputs("ch_yz_b", ch_yz_b)?;
    let j = JointPmf::from_input(p_vb, ch_xb_given_vb)?.extend(1, ch_yz_b)?;
    let adv = mutual_information(&j, &[0], &[2])? - mutual_information(&j, &[0], &[3])?;
    Ok(adv.max(0.0).min(i_xf_zf))
}

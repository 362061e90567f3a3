//! Schalkwijk-Kailath coding with perfect output feedback.
//!
//! A message is mapped to the midpoint `theta` of its subinterval of
//! `[-1/2, 1/2]`. Alice first sends `alpha_1 * theta`, then at every later
//! use the scaled estimation error of Bob's running ML estimate, which she
//! can track because she sees Bob's outputs.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::{GaussianWiretapParams, NoiseSampler, NoiseTriple};
use crate::error::{Error, Result};
use crate::fmt::sig;

/// Per-run generator: ChaCha8 keyed by the seed, one stream per trial.
pub const SK_RNG: &str = "chacha8 (rand_chacha 0.9, seed_from_u64(seed), set_stream(trial))";

pub const TRANSCRIPT_CSV_HEADER: &str = "i,x,y,z,ybar,theta_hat";

/// A complete SK run description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkConfig {
    pub params: GaussianWiretapParams,
    /// Channel uses per message.
    pub n: usize,
    /// Number of messages `M`.
    pub num_messages: u64,
    pub seed: u64,
}

impl SkConfig {
    pub fn new(
        params: GaussianWiretapParams,
        n: usize,
        num_messages: u64,
        seed: u64,
    ) -> Result<Self> {
        let c = SkConfig {
            params,
            n,
            num_messages,
            seed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.num_messages < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 messages, got {}",
                self.num_messages
            )));
        }
        if self.n > i32::MAX as usize || !self.alpha().powf(2.0 * self.n as f64).is_finite() {
            return Err(Error::InvalidParameter(format!(
                "n = {} overflows the gain schedule",
                self.n
            )));
        }
        Ok(())
    }

    /// `sqrt(P / var_n)`.
    pub fn gamma(&self) -> f64 {
        (self.params.power / self.params.var_n).sqrt()
    }

    /// `sqrt((P + var_n) / var_n)`.
    pub fn alpha(&self) -> f64 {
        ((self.params.power + self.params.var_n) / self.params.var_n).sqrt()
    }

    /// Gain at use `i` (1-based): `alpha` for the first use, then
    /// `gamma * alpha^(i-1)`.
    pub fn gain(&self, i: usize) -> f64 {
        if i <= 1 {
            self.alpha()
        } else {
            self.gamma() * self.alpha().powi(i as i32 - 1)
        }
    }

    pub fn gains(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.gain(i)).collect()
    }
}

/// Signal point of message `w` in `1..=num_messages`.
pub fn encode_message(w: u64, num_messages: u64) -> Result<f64> {
    if num_messages == 0 || w == 0 || w > num_messages {
        return Err(Error::InvalidParameter(format!(
            "message {w} outside 1..={num_messages}"
        )));
    }
    Ok(-0.5 + (w as f64 - 0.5) / num_messages as f64)
}

/// Index of the midpoint nearest to `theta_hat`, clamped to
/// `1..=num_messages`. A point exactly between two midpoints decodes to
/// the lower index; NaN decodes to 1.
pub fn decode_theta(theta_hat: f64, num_messages: u64) -> u64 {
    let m = num_messages.max(1);
    let cell = ((theta_hat + 0.5) * m as f64).ceil();
    if !(cell >= 1.0) {
        1
    } else if cell >= m as f64 {
        m
    } else {
        cell as u64
    }
}

/// Everything observed during one SK run. Index `k` holds use `i = k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkTranscript {
    pub w: u64,
    pub theta: f64,
    pub decoded: u64,
    pub gains: Vec<f64>,
    pub n_noise: Vec<f64>,
    pub m_noise: Vec<f64>,
    pub s_noise: Vec<f64>,
    /// Alice's channel input.
    pub x: Vec<f64>,
    /// Bob's output.
    pub y: Vec<f64>,
    /// Eve's forward output.
    pub z: Vec<f64>,
    /// Feedback as overheard by Eve.
    pub ybar: Vec<f64>,
    /// Bob's per-use observation of `theta`.
    pub xhat: Vec<f64>,
    /// Bob's estimate after each use.
    pub theta_hat: Vec<f64>,
    /// `-gain_i / sum_{j<i} gain_j^2`; undefined for the first use and stored as 0.
    pub h: Vec<f64>,
}

impl SkTranscript {
    pub fn final_estimate(&self) -> f64 {
        *self.theta_hat.last().expect("n >= 1")
    }

    pub fn is_error(&self) -> bool {
        self.decoded != self.w
    }

    /// Debug dump with 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{TRANSCRIPT_CSV_HEADER}")?;
        for k in 0..self.x.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                k + 1,
                sig(self.x[k], 12),
                sig(self.y[k], 12),
                sig(self.z[k], 12),
                sig(self.ybar[k], 12),
                sig(self.theta_hat[k], 12)
            )?;
        }
        Ok(())
    }
}

/// Generator for trial `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs the scheme for message `w`, drawing noise from stream 0 of
/// `config.seed`.
pub fn run_sk(config: &SkConfig, w: u64) -> Result<SkTranscript> {
    config.validate()?;
    let sampler = NoiseSampler::new(&config.params)?;
    let mut rng = trial_rng(config.seed, 0);
    let noise: Vec<NoiseTriple> = (0..config.n).map(|_| sampler.sample(&mut rng)).collect();
    run_sk_with_noise(config, w, &noise)
}

/// Runs the scheme for message `w` on a given noise realization.
pub fn run_sk_with_noise(config: &SkConfig, w: u64, noise: &[NoiseTriple]) -> Result<SkTranscript> {
    config.validate()?;
    if noise.len() != config.n {
        return Err(Error::LengthMismatch {
            left: noise.len(),
            right: config.n,
        });
    }
    let theta = encode_message(w, config.num_messages)?;
    let n = config.n;
    let gains = config.gains();
    let mut t = SkTranscript {
        w,
        theta,
        decoded: 0,
        gains: gains.clone(),
        n_noise: noise.iter().map(|e| e.n).collect(),
        m_noise: noise.iter().map(|e| e.m).collect(),
        s_noise: noise.iter().map(|e| e.s).collect(),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        ybar: Vec::with_capacity(n),
        xhat: Vec::with_capacity(n),
        theta_hat: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
    };
    // Running sums of gain^2 and gain^2 * xhat.
    let (mut sum_g2, mut sum_g2_xhat) = (0.0_f64, 0.0_f64);
    let mut prev_estimate = 0.0;
    for (k, (&g, e)) in gains.iter().zip(noise).enumerate() {
        let x = g * (theta - prev_estimate);
        let y = x + e.n;
        let xhat = prev_estimate + y / g;
        t.h.push(if k == 0 { 0.0 } else { -g / sum_g2 });
        sum_g2 += g * g;
        sum_g2_xhat += g * g * xhat;
        prev_estimate = sum_g2_xhat / sum_g2;
        t.x.push(x);
        t.y.push(y);
        t.z.push(x + e.m);
        t.ybar.push(y + e.s);
        t.xhat.push(xhat);
        t.theta_hat.push(prev_estimate);
    }
    t.decoded = decode_theta(prev_estimate, config.num_messages);
    Ok(t)
}

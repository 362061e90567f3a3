//! Gaussian wiretap channel with perfect output feedback to the transmitter
//! and a noisy copy of that feedback at the eavesdropper.

pub mod analysis;
pub mod monte_carlo;
pub mod params;
pub mod sk;

pub use analysis::{
    capacity_forward, error_variance_theory, leakage_bound, leakage_bound_with, leakage_c1,
    leakage_c2, secrecy_capacity_no_feedback, secrecy_summary, secrecy_summary_with, LeakageBound,
    SecrecySummary, ThetaVariance,
};
pub use monte_carlo::{monte_carlo_sk, SkMonteCarlo};
pub use params::{GaussianWiretapParams, NoiseSampler, NoiseTriple, NOISE_FACTORIZATION};
pub use sk::{
    decode_theta, encode_message, run_sk, run_sk_with_noise, trial_rng, SkConfig, SkTranscript,
};

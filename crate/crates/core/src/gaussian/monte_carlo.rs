use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analysis::error_variance_theory;
use super::params::{NoiseSampler, NoiseTriple, NOISE_FACTORIZATION};
use super::sk::{run_sk_with_noise, trial_rng, SkConfig, SK_RNG};
use crate::error::{Error, Result};

/// Trials per accumulation chunk. Chunks are merged in index order, so the
/// result does not depend on how many threads ran them.
const CHUNK: u64 = 256;

/// z-value of the reported two-sided 95% confidence half-widths.
const Z95: f64 = 1.959963984540054;

/// Empirical behaviour of the SK scheme over many independent messages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkMonteCarlo {
    pub trials: u64,
    pub error_count: u64,
    pub empirical_error_rate: f64,
    /// Normal-approximation 95% half-width of the error rate.
    pub error_rate_ci_halfwidth: f64,
    /// Sample mean of `theta - theta_hat_n`.
    pub mean_error: f64,
    /// Sample variance of `theta - theta_hat_n`.
    pub empirical_error_variance: f64,
    pub variance_standard_error: f64,
    pub variance_ci_halfwidth: f64,
    pub theory_error_variance: f64,
    /// Mean of `X_i^2` per use.
    pub mean_power: Vec<f64>,
    /// Sample correlation between `theta` and Eve's `Z_i` per use.
    pub eve_theta_correlation: Vec<f64>,
    pub rng: String,
    pub noise_factorization: String,
}

#[derive(Clone)]
struct Acc {
    trials: u64,
    errors: u64,
    // Raw moments of the final estimation error.
    e1: f64,
    e2: f64,
    e3: f64,
    e4: f64,
    t1: f64,
    t2: f64,
    x2: Vec<f64>,
    z1: Vec<f64>,
    z2: Vec<f64>,
    tz: Vec<f64>,
}

impl Acc {
    fn new(n: usize) -> Acc {
        Acc {
            trials: 0,
            errors: 0,
            e1: 0.0,
            e2: 0.0,
            e3: 0.0,
            e4: 0.0,
            t1: 0.0,
            t2: 0.0,
            x2: vec![0.0; n],
            z1: vec![0.0; n],
            z2: vec![0.0; n],
            tz: vec![0.0; n],
        }
    }

    fn merge(mut self, o: &Acc) -> Acc {
        self.trials += o.trials;
        self.errors += o.errors;
        self.e1 += o.e1;
        self.e2 += o.e2;
        self.e3 += o.e3;
        self.e4 += o.e4;
        self.t1 += o.t1;
        self.t2 += o.t2;
        for (a, b) in [
            (&mut self.x2, &o.x2),
            (&mut self.z1, &o.z1),
            (&mut self.z2, &o.z2),
            (&mut self.tz, &o.tz),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self
    }
}

/// Runs `trials` independent messages, each uniform over `1..=M`. Trial
/// `t` draws its message and noise from stream `t + 1` of `config.seed`.
pub fn monte_carlo_sk(config: &SkConfig, trials: u64) -> Result<SkMonteCarlo> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let sampler = NoiseSampler::new(&config.params)?;
    let n = config.n;
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<Result<Acc>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc::new(n);
            let mut noise: Vec<NoiseTriple> = Vec::with_capacity(n);
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(config.seed, t + 1);
                let w = rng.random_range(1..=config.num_messages);
                noise.clear();
                noise.extend((0..n).map(|_| sampler.sample(&mut rng)));
                let tr = run_sk_with_noise(config, w, &noise)?;
                let e = tr.theta - tr.final_estimate();
                acc.trials += 1;
                acc.errors += u64::from(tr.is_error());
                acc.e1 += e;
                acc.e2 += e * e;
                acc.e3 += e * e * e;
                acc.e4 += e * e * e * e;
                acc.t1 += tr.theta;
                acc.t2 += tr.theta * tr.theta;
                for k in 0..n {
                    acc.x2[k] += tr.x[k] * tr.x[k];
                    acc.z1[k] += tr.z[k];
                    acc.z2[k] += tr.z[k] * tr.z[k];
                    acc.tz[k] += tr.theta * tr.z[k];
                }
            }
            Ok(acc)
        })
        .collect();
    let mut acc = Acc::new(n);
    for p in partials {
        acc = acc.merge(&p?);
    }
    Ok(summarize(config, &acc))
}

fn summarize(config: &SkConfig, a: &Acc) -> SkMonteCarlo {
    let t = a.trials as f64;
    let rate = a.errors as f64 / t;
    let mean = a.e1 / t;
    let (m2, m3, m4) = (a.e2 / t, a.e3 / t, a.e4 / t);
    let central2 = m2 - mean * mean;
    let central4 = m4 - 4.0 * mean * m3 + 6.0 * mean * mean * m2 - 3.0 * mean.powi(4);
    let variance = if a.trials > 1 {
        central2 * t / (t - 1.0)
    } else {
        0.0
    };
    // Large-sample standard error of the sample variance.
    let var_se = ((central4 - central2 * central2).max(0.0) / t).sqrt();
    let theta_var = a.t2 / t - (a.t1 / t).powi(2);
    let corr = (0..config.n)
        .map(|k| {
            let zm = a.z1[k] / t;
            let cov = a.tz[k] / t - (a.t1 / t) * zm;
            let zv = a.z2[k] / t - zm * zm;
            let d = (theta_var * zv).sqrt();
            if d > 0.0 {
                cov / d
            } else {
                0.0
            }
        })
        .collect();
    SkMonteCarlo {
        trials: a.trials,
        error_count: a.errors,
        empirical_error_rate: rate,
        error_rate_ci_halfwidth: Z95 * (rate * (1.0 - rate) / t).sqrt(),
        mean_error: mean,
        empirical_error_variance: variance,
        variance_standard_error: var_se,
        variance_ci_halfwidth: Z95 * var_se,
        theory_error_variance: error_variance_theory(config),
        mean_power: a.x2.iter().map(|s| s / t).collect(),
        eve_theta_correlation: corr,
        rng: SK_RNG.to_string(),
        noise_factorization: NOISE_FACTORIZATION.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::params::GaussianWiretapParams;

    #[test]
    fn deterministic_in_seed() {
        let p = GaussianWiretapParams::independent(1.0, 1.0, 1.0, 1.0).unwrap();
        let c = SkConfig::new(p, 6, 4, 11).unwrap();
        let a = monte_carlo_sk(&c, 1000).unwrap();
        let b = monte_carlo_sk(&c, 1000).unwrap();
        assert_eq!(a, b);
        let d = monte_carlo_sk(&SkConfig { seed: 12, ..c }, 1000).unwrap();
        assert_ne!(a.empirical_error_variance, d.empirical_error_variance);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let p = GaussianWiretapParams::new(1.0, 1.0, 2.0, 0.5, 0.2, 0.1, -0.3).unwrap();
        let c = SkConfig::new(p, 5, 8, 99).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| monte_carlo_sk(&c, 3000).unwrap());
        let b = four.install(|| monte_carlo_sk(&c, 3000).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_zero_trials() {
        let p = GaussianWiretapParams::independent(1.0, 1.0, 1.0, 1.0).unwrap();
        let c = SkConfig::new(p, 2, 2, 0).unwrap();
        assert!(monte_carlo_sk(&c, 0).is_err());
        assert_eq!(monte_carlo_sk(&c, 1).unwrap().trials, 1);
    }
}

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of the covariance square-root used to draw correlated noise.
pub const NOISE_FACTORIZATION: &str =
    "symmetric-eigen-sqrt (nalgebra SymmetricEigen, V diag(sqrt(max(l,0))) V^T)";

/// Smallest admissible covariance eigenvalue, relative to the largest.
const PSD_TOL: f64 = 1e-10;

/// Power constraint and noise statistics of the Gaussian wiretap channel
/// with noisy overheard feedback.
///
/// `N` is Bob's noise, `M` Eve's forward noise and `S` the extra noise on
/// the feedback Eve overhears. `rho1`, `rho2`, `rho3` correlate `(N, M)`,
/// `(N, S)` and `(M, S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWiretapParams {
    pub power: f64,
    pub var_n: f64,
    pub var_m: f64,
    pub var_s: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

impl GaussianWiretapParams {
    pub fn new(
        power: f64,
        var_n: f64,
        var_m: f64,
        var_s: f64,
        rho1: f64,
        rho2: f64,
        rho3: f64,
    ) -> Result<Self> {
        let p = GaussianWiretapParams {
            power,
            var_n,
            var_m,
            var_s,
            rho1,
            rho2,
            rho3,
        };
        p.validate()?;
        Ok(p)
    }

    /// Uncorrelated noises.
    pub fn independent(power: f64, var_n: f64, var_m: f64, var_s: f64) -> Result<Self> {
        Self::new(power, var_n, var_m, var_s, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("power", self.power),
            ("var_n", self.var_n),
            ("var_m", self.var_m),
            ("var_s", self.var_s),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(name, v, "(0, inf)"));
            }
        }
        for (name, r) in [
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("rho3", self.rho3),
        ] {
            if !(r.abs() < 1.0) {
                return Err(Error::domain(name, r, "(-1, 1)"));
            }
        }
        let eig = SymmetricEigen::new(self.covariance()).eigenvalues;
        let scale = eig.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        let min = eig.min();
        if min < -PSD_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "noise covariance is not non-negative definite (smallest eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    /// Covariance of `(N, M, S)`.
    pub fn covariance(&self) -> Matrix3<f64> {
        let (sn, sm, ss) = (self.var_n.sqrt(), self.var_m.sqrt(), self.var_s.sqrt());
        let nm = self.rho1 * sn * sm;
        let ns = self.rho2 * sn * ss;
        let ms = self.rho3 * sm * ss;
        Matrix3::new(
            self.var_n, nm, ns, //
            nm, self.var_m, ms, //
            ns, ms, self.var_s,
        )
    }
}

/// One draw of the per-use noise triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTriple {
    pub n: f64,
    pub m: f64,
    pub s: f64,
}

/// Draws `(N, M, S)` with covariance `C` as `C^{1/2} g`, `g` standard normal.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    factor: Matrix3<f64>,
}

impl NoiseSampler {
    pub fn new(params: &GaussianWiretapParams) -> Result<Self> {
        params.validate()?;
        let eig = SymmetricEigen::new(params.covariance());
        let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let factor =
            eig.eigenvectors * Matrix3::from_diagonal(&root) * eig.eigenvectors.transpose();
        Ok(NoiseSampler { factor })
    }

    /// The symmetric square root of the covariance.
    pub fn factor(&self) -> &Matrix3<f64> {
        &self.factor
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> NoiseTriple {
        let g = Vector3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let v = self.factor * g;
        NoiseTriple {
            n: v[0],
            m: v[1],
            s: v[2],
        }
    }
}

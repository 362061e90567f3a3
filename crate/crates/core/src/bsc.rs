//! Secrecy rates for binary symmetric forward and backward channels.
//!
//! The backward channel is time-shared: a fraction `alpha` of its uses
//! generates a secret key (consumed as a one-time pad on the forward link)
//! and the rest carries random bits that Alice modulo-adds to her message.
//! The total rate is piecewise linear in `alpha`, so the optimum is found
//! exactly by evaluating the finitely many breakpoints.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::fmt::sig;
use crate::info_theory::h2;

/// Generator used by [`simulate_maurer`]; recorded in its report.
pub const MAURER_RNG: &str = "chacha8 (rand_chacha 0.9, seed_from_u64)";

/// Points per axis of the default surface grid over `[0, 1/2]`.
pub const DEFAULT_GRID_POINTS: usize = 101;

pub const SURFACE_CSV_HEADER: &str = "eps,delta,total_rate,alpha_star,improvement";

/// Candidates within this margin of the best total do not displace a
/// smaller `alpha`.
const TIE_TOL: f64 = 1e-14;

/// Crossover probabilities of the four binary symmetric links:
/// Alice to Bob (`eps_f`), Alice to Eve (`del_f`), Bob to Alice (`eps_b`)
/// and Bob to Eve (`del_b`). Each lies in `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BscSystem {
    pub eps_f: f64,
    pub del_f: f64,
    pub eps_b: f64,
    pub del_b: f64,
}

impl BscSystem {
    pub fn new(eps_f: f64, del_f: f64, eps_b: f64, del_b: f64) -> Result<Self> {
        for (name, p) in [
            ("eps_f", eps_f),
            ("del_f", del_f),
            ("eps_b", eps_b),
            ("del_b", del_b),
        ] {
            check_crossover(name, p)?;
        }
        Ok(BscSystem {
            eps_f,
            del_f,
            eps_b,
            del_b,
        })
    }

    /// Same as [`BscSystem::new`] but first maps any crossover `p > 1/2`
    /// to `1 - p` (relabeling the channel output). Values outside `[0, 1]`
    /// are still rejected.
    pub fn relabeled(eps_f: f64, del_f: f64, eps_b: f64, del_b: f64) -> Result<Self> {
        let fold = |name: &str, p: f64| -> Result<f64> {
            let p = check_range(name, p, 0.0, 1.0, "[0, 1]")?;
            Ok(if p > 0.5 { 1.0 - p } else { p })
        };
        Self::new(
            fold("eps_f", eps_f)?,
            fold("del_f", del_f)?,
            fold("eps_b", eps_b)?,
            fold("del_b", del_b)?,
        )
    }

    /// Same crossovers on the forward and backward channels.
    pub fn symmetric(eps: f64, del: f64) -> Result<Self> {
        Self::new(eps, del, eps, del)
    }
}

fn check_crossover(name: &str, p: f64) -> Result<f64> {
    check_range(
        name,
        p,
        0.0,
        0.5,
        "[0, 0.5] (relabel p -> 1 - p for p > 0.5)",
    )
}

/// Per-part secrecy rates for one time-share `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBreakdown {
    /// Wiretap-coded part, `h(del_f) - h(eps_f)` when `eps_f < del_f`.
    pub r1: f64,
    /// One-time-padded part using the backward key.
    pub r2: f64,
    /// Modulo-added part using the backward random bits.
    pub r3: f64,
    pub alpha: f64,
    pub total: f64,
}

/// Flip probability of two independent BSCs in series.
pub fn cascade_crossover(eps_b: f64, del_b: f64) -> Result<f64> {
    check_range("eps_b", eps_b, 0.0, 1.0, "[0, 1]")?;
    check_range("del_b", del_b, 0.0, 1.0, "[0, 1]")?;
    Ok(cascade(eps_b, del_b))
}

fn cascade(a: f64, b: f64) -> f64 {
    a + b - 2.0 * a * b
}

/// Largest key rate the backward channel supports, `[h(del_b) - h(eps_b)]^+`.
pub fn backward_key_capacity(sys: &BscSystem) -> f64 {
    (h2(sys.del_b) - h2(sys.eps_b)).max(0.0)
}

/// Secrecy capacity of a binary wiretap channel without feedback,
/// `[h(del) - h(eps)]^+`.
pub fn no_feedback_secrecy_capacity(eps: f64, del: f64) -> Result<f64> {
    check_crossover("eps", eps)?;
    check_crossover("del", del)?;
    Ok((h2(del) - h2(eps)).max(0.0))
}

/// Quantities of the rate expression that do not depend on `alpha`.
struct Terms {
    r1: f64,
    /// Forward capacity left after the wiretap-coded part.
    public: f64,
    key: f64,
    /// Eve's disadvantage on the modulo-added channel.
    modulo_gain: f64,
}

impl Terms {
    fn of(sys: &BscSystem) -> Terms {
        // eps_f == del_f takes the second branch; r1 is 0 there either way.
        let (r1, public) = if sys.eps_f < sys.del_f {
            (h2(sys.del_f) - h2(sys.eps_f), 1.0 - h2(sys.del_f))
        } else {
            (0.0, 1.0 - h2(sys.eps_f))
        };
        Terms {
            r1,
            public,
            key: backward_key_capacity(sys),
            modulo_gain: h2(cascade(sys.eps_b, sys.del_b)) - h2(sys.eps_b),
        }
    }

    fn at(&self, alpha: f64) -> RateBreakdown {
        let r2 = self.public.min(alpha * self.key);
        let r3 = (self.public - alpha * self.key).max(0.0).min(1.0 - alpha) * self.modulo_gain;
        RateBreakdown {
            r1: self.r1,
            r2,
            r3,
            alpha,
            total: self.r1 + r2 + r3,
        }
    }

    /// Endpoints plus every `alpha` where a `min` or clamp switches branch.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0, 1.0];
        if self.key > 0.0 {
            // alpha * key = public: r2 saturates and the clamp in r3 hits 0.
            pts.push(self.public / self.key);
        }
        if self.key != 1.0 {
            // public - alpha * key = 1 - alpha: r3 switches its min branch.
            pts.push((1.0 - self.public) / (1.0 - self.key));
        }
        pts.retain(|a| (0.0..=1.0).contains(a));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Rates `(r1, r2, r3)` of the combined scheme for a fixed time-share.
pub fn rate_breakdown(sys: &BscSystem, alpha: f64) -> Result<RateBreakdown> {
    check_range("alpha", alpha, 0.0, 1.0, "[0, 1]")?;
    Ok(Terms::of(sys).at(alpha))
}

/// The time-shares at which the total rate can change slope, in ascending
/// order, always including 0 and 1.
pub fn alpha_breakpoints(sys: &BscSystem) -> Vec<f64> {
    Terms::of(sys).breakpoints()
}

/// Maximizes the total rate over `alpha` in `[0, 1]`. Ties go to the
/// smaller `alpha`.
pub fn optimize_alpha(sys: &BscSystem) -> RateBreakdown {
    let terms = Terms::of(sys);
    let mut best = terms.at(0.0);
    for alpha in terms.breakpoints() {
        let cand = terms.at(alpha);
        if cand.total > best.total + TIE_TOL {
            best = cand;
        }
    }
    best
}

/// How the surface grid maps onto the four crossovers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SurfaceMode {
    /// `eps_f = eps_b = eps`, `del_f = del_b = delta`.
    Symmetric,
    /// The grid sweeps the forward channel; the backward one is fixed.
    FixedBackward { eps_b: f64, del_b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub eps: f64,
    pub delta: f64,
    pub total_rate: f64,
    pub alpha_star: f64,
    /// Optimized total minus the no-feedback capacity `[h(delta) - h(eps)]^+`.
    pub improvement: f64,
}

/// `points` evenly spaced values over `[lo, hi]`, endpoints included.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidParameter("grid has no points".into()));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

/// The default 101-point grid over `[0, 1/2]`.
pub fn default_grid() -> Vec<f64> {
    linear_grid(0.0, 0.5, DEFAULT_GRID_POINTS).expect("non-empty grid")
}

/// Optimized total rate and improvement over no feedback at every grid
/// point, `eps` varying slowest.
pub fn rate_surface(
    grid_eps: &[f64],
    grid_del: &[f64],
    mode: SurfaceMode,
) -> Result<Vec<SurfacePoint>> {
    if grid_eps.is_empty() || grid_del.is_empty() {
        return Err(Error::InvalidParameter("surface grid is empty".into()));
    }
    for &p in grid_eps {
        check_crossover("eps", p)?;
    }
    for &p in grid_del {
        check_crossover("delta", p)?;
    }
    if let SurfaceMode::FixedBackward { eps_b, del_b } = mode {
        check_crossover("eps_b", eps_b)?;
        check_crossover("del_b", del_b)?;
    }
    let rows: Vec<Vec<SurfacePoint>> = grid_eps
        .par_iter()
        .map(|&eps| {
            grid_del
                .iter()
                .map(|&delta| {
                    let sys = match mode {
                        SurfaceMode::Symmetric => BscSystem {
                            eps_f: eps,
                            del_f: delta,
                            eps_b: eps,
                            del_b: delta,
                        },
                        SurfaceMode::FixedBackward { eps_b, del_b } => BscSystem {
                            eps_f: eps,
                            del_f: delta,
                            eps_b,
                            del_b,
                        },
                    };
                    let best = optimize_alpha(&sys);
                    SurfacePoint {
                        eps,
                        delta,
                        total_rate: best.total,
                        alpha_star: best.alpha,
                        improvement: best.total - (h2(delta) - h2(eps)).max(0.0),
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Writes the surface as CSV with 9 significant digits per value.
pub fn write_surface_csv<W: Write>(mut out: W, points: &[SurfacePoint]) -> Result<()> {
    writeln!(out, "{SURFACE_CSV_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            sig(p.eps, 9),
            sig(p.delta, 9),
            sig(p.total_rate, 9),
            sig(p.alpha_star, 9),
            sig(p.improvement, 9)
        )?;
    }
    Ok(())
}

/// Empirical error rates of Bob's and Eve's reconstructions in the
/// modulo-add feedback scheme, next to their closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaurerReport {
    pub eps_b: f64,
    pub del_b: f64,
    pub n: u64,
    pub seed: u64,
    pub rng: String,
    pub bob_ber: f64,
    pub eve_ber: f64,
    pub expected_bob: f64,
    pub expected_eve: f64,
}

/// Simulates `n` uses of the modulo-add scheme: Bob sends random bits
/// `x_b`, Alice receives `y_b` over BSC(`eps_b`) and Eve `z_b` over
/// BSC(`del_b`). Alice sends `v ^ y_b` noiselessly; Bob decodes with `x_b`
/// and Eve with `z_b`.
pub fn simulate_maurer(eps_b: f64, del_b: f64, n: u64, seed: u64) -> Result<MaurerReport> {
    check_range("eps_b", eps_b, 0.0, 1.0, "[0, 1]")?;
    check_range("del_b", del_b, 0.0, 1.0, "[0, 1]")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bob_err, mut eve_err) = (0u64, 0u64);
    for _ in 0..n {
        let v: bool = rng.random();
        let x_b: bool = rng.random();
        let y_b = x_b ^ rng.random_bool(eps_b);
        let z_b = x_b ^ rng.random_bool(del_b);
        let x_f = v ^ y_b;
        bob_err += u64::from((x_f ^ x_b) != v);
        eve_err += u64::from((x_f ^ z_b) != v);
    }
    Ok(MaurerReport {
        eps_b,
        del_b,
        n,
        seed,
        rng: MAURER_RNG.to_string(),
        bob_ber: bob_err as f64 / n as f64,
        eve_ber: eve_err as f64 / n as f64,
        expected_bob: eps_b,
        expected_eve: cascade(eps_b, del_b),
    })
}

/// Bitwise XOR of a message with an equally long key.
pub fn one_time_pad(message: &[bool], key: &[bool]) -> Result<Vec<bool>> {
    if message.len() != key.len() {
        return Err(Error::LengthMismatch {
            left: message.len(),
            right: key.len(),
        });
    }
    Ok(message.iter().zip(key).map(|(m, k)| m ^ k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_theory::binary_entropy_inverse;

    fn h(p: f64) -> f64 {
        crate::info_theory::binary_entropy(p).unwrap()
    }

    #[test]
    fn cascade_examples() {
        assert_eq!(cascade_crossover(0.0, 0.3).unwrap(), 0.3);
        assert_eq!(cascade_crossover(0.5, 0.3).unwrap(), 0.5);
        assert!((cascade_crossover(0.11, 0.11).unwrap() - 0.1958).abs() < 1e-15);
        assert!(cascade_crossover(1.2, 0.1).is_err());
    }

    #[test]
    fn key_capacity_examples() {
        let d = binary_entropy_inverse(0.5).unwrap();
        assert_eq!(
            backward_key_capacity(&BscSystem::new(0.1, 0.2, 0.2, 0.2).unwrap()),
            0.0
        );
        let c = backward_key_capacity(&BscSystem::new(0.0, 0.0, 0.0, d).unwrap());
        assert!((c - 0.5).abs() < 1e-12);
        assert_eq!(
            backward_key_capacity(&BscSystem::new(0.0, 0.0, 0.3, 0.1).unwrap()),
            0.0
        );
    }

    #[test]
    fn no_feedback_examples() {
        let c = no_feedback_secrecy_capacity(0.0, 0.11).unwrap();
        assert!((c - 0.5).abs() < 1e-3);
        assert_eq!(no_feedback_secrecy_capacity(0.3, 0.3).unwrap(), 0.0);
        assert_eq!(no_feedback_secrecy_capacity(0.2, 0.1).unwrap(), 0.0);
        assert!(no_feedback_secrecy_capacity(0.7, 0.1).is_err());
    }

    #[test]
    fn construction_limits() {
        assert!(BscSystem::new(0.6, 0.1, 0.1, 0.1).is_err());
        assert!(BscSystem::new(-0.1, 0.1, 0.1, 0.1).is_err());
        let s = BscSystem::relabeled(0.9, 0.1, 0.5, 0.7).unwrap();
        assert!((s.eps_f - 0.1).abs() < 1e-15 && (s.del_b - 0.3).abs() < 1e-15);
        assert!(BscSystem::relabeled(1.1, 0.1, 0.1, 0.1).is_err());
    }

    #[test]
    fn breakdown_at_peak_point() {
        let d = binary_entropy_inverse(0.5).unwrap();
        let sys = BscSystem::symmetric(0.0, d).unwrap();
        let b = rate_breakdown(&sys, 1.0).unwrap();
        assert!((b.r1 - 0.5).abs() < 1e-10 && (b.r2 - 0.5).abs() < 1e-10 && b.r3.abs() < 1e-10);
        assert!((b.total - 1.0).abs() < 1e-10);

        let b = rate_breakdown(&sys, 0.0).unwrap();
        assert!((b.r1 - 0.5).abs() < 1e-10);
        assert_eq!(b.r2, 0.0);
        assert!((b.r3 - 0.25).abs() < 1e-10);
        assert!((b.total - 0.75).abs() < 1e-10);

        assert!(rate_breakdown(&sys, 1.5).is_err());
        assert!(rate_breakdown(&sys, f64::NAN).is_err());
    }

    #[test]
    fn noiseless_eve_gives_zero() {
        let sys = BscSystem::symmetric(0.2, 0.0).unwrap();
        for i in 0..=20 {
            assert!(rate_breakdown(&sys, i as f64 / 20.0).unwrap().total.abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_branch_is_irrelevant() {
        // Literal first-branch formulas evaluated at eps_f == del_f.
        let (e, eb, db) = (0.17, 0.05, 0.3);
        let sys = BscSystem::new(e, e, eb, db).unwrap();
        let cb = (h(db) - h(eb)).max(0.0);
        let k = h(eb + db - 2.0 * eb * db) - h(eb);
        for i in 0..=10 {
            let a = i as f64 / 10.0;
            let r1 = h(e) - h(e);
            let r2 = (1.0 - h(e)).min(a * cb);
            let r3 = (1.0 - h(e) - a * cb).max(0.0).min(1.0 - a) * k;
            let got = rate_breakdown(&sys, a).unwrap();
            assert_eq!(got.r1, 0.0);
            assert!((got.total - (r1 + r2 + r3)).abs() < 1e-15);
        }
    }

    #[test]
    fn optimizer_examples() {
        let d = binary_entropy_inverse(0.5).unwrap();
        let best = optimize_alpha(&BscSystem::symmetric(0.0, d).unwrap());
        assert!((best.alpha - 1.0).abs() < 1e-9);
        assert!((best.total - 1.0).abs() < 1e-10);

        // No backward key: r2 vanishes and alpha = 0 maximizes r3.
        let sys = BscSystem::new(0.05, 0.2, 0.3, 0.1).unwrap();
        let best = optimize_alpha(&sys);
        assert_eq!(best.alpha, 0.0);
        let grid = (0..=10_000)
            .map(|i| rate_breakdown(&sys, i as f64 * 1e-4).unwrap().total)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best.total - grid).abs() < 1e-12);
        assert_eq!(best.total, rate_breakdown(&sys, 0.0).unwrap().total);

        // Nothing to gain: ties resolve to alpha = 0.
        assert_eq!(
            optimize_alpha(&BscSystem::symmetric(0.2, 0.2).unwrap()).alpha,
            0.0
        );
    }

    #[test]
    fn surface_rows() {
        let grid = linear_grid(0.0, 0.5, 11).unwrap();
        let pts = rate_surface(&grid, &[0.0], SurfaceMode::Symmetric).unwrap();
        assert_eq!(pts.len(), 11);
        for p in &pts {
            let b = optimize_alpha(&BscSystem::symmetric(p.eps, 0.0).unwrap());
            assert_eq!(p.total_rate, b.total);
            assert!(p.total_rate.abs() < 1e-15, "{p:?}");
        }
        assert!(rate_surface(&[], &[0.1], SurfaceMode::Symmetric).is_err());
        assert!(rate_surface(&[0.6], &[0.1], SurfaceMode::Symmetric).is_err());
    }

    #[test]
    fn surface_csv_format() {
        let pts = rate_surface(&[0.0], &[0.11], SurfaceMode::Symmetric).unwrap();
        let mut buf = Vec::new();
        write_surface_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SURFACE_CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 5);
        assert_eq!(row[0], "0");
        assert_eq!(row[1], "0.11");
        let improvement: f64 = row[4].parse().unwrap();
        assert!((improvement - 0.5).abs() < 1e-3);
    }

    #[test]
    fn maurer_noiseless_and_noisy() {
        let r = simulate_maurer(0.0, 0.0, 10_000, 1).unwrap();
        assert_eq!((r.bob_ber, r.eve_ber), (0.0, 0.0));
        let r = simulate_maurer(0.5, 0.1, 100_000, 2).unwrap();
        let sd = (0.25f64 / 1e5).sqrt();
        assert!((r.bob_ber - 0.5).abs() < 3.0 * sd);
        assert!(simulate_maurer(0.1, 0.1, 0, 1).is_err());
        assert_eq!(
            simulate_maurer(0.1, 0.2, 1000, 9).unwrap(),
            simulate_maurer(0.1, 0.2, 1000, 9).unwrap()
        );
    }

    #[test]
    fn one_time_pad_examples() {
        let m = vec![true, false, true, true, false];
        assert_eq!(one_time_pad(&m, &[false; 5]).unwrap(), m);
        assert_eq!(one_time_pad(&m, &m).unwrap(), vec![false; 5]);
        assert!(one_time_pad(&m, &[true; 4]).is_err());
    }
}

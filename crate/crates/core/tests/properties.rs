use feedsec::bsc::{
    alpha_breakpoints, backward_key_capacity, linear_grid, no_feedback_secrecy_capacity,
    one_time_pad, optimize_alpha, rate_breakdown, rate_surface, BscSystem, SurfaceMode,
};
use feedsec::gaussian::{monte_carlo_sk, run_sk, GaussianWiretapParams, NoiseSampler, SkConfig};
use feedsec::info_theory::{
    binary_entropy, binary_entropy_inverse, conditional_mutual_information, entropy,
    mutual_information, Channel, JointPmf, Pmf,
};
use feedsec::region::{theorem1_rate, FeedbackSystemSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pmf_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, len).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    })
}

fn joint_strategy(dims: Vec<usize>) -> impl Strategy<Value = JointPmf> {
    let n = dims.iter().product();
    pmf_strategy(n).prop_map(move |p| JointPmf::new(dims.clone(), p).unwrap())
}

fn crossover() -> impl Strategy<Value = f64> {
    0.0f64..=0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entropy_inverse_roundtrip(p in 0.0f64..=0.5) {
        let h = binary_entropy(p).unwrap();
        let back = binary_entropy_inverse(h).unwrap();
        prop_assert!((binary_entropy(back).unwrap() - h).abs() < 1e-12);
        prop_assert!((back - p).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_bounds(j in joint_strategy(vec![3, 4])) {
        let i = mutual_information(&j, &[0], &[1]).unwrap();
        prop_assert!(i >= -1e-12);
        prop_assert!(i <= j.entropy_of(&[0]).unwrap().min(j.entropy_of(&[1]).unwrap()) + 1e-12);
        prop_assert!((i - mutual_information(&j, &[1], &[0]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn chain_rule(j in joint_strategy(vec![2, 3, 2])) {
        let i_a_bc = mutual_information(&j, &[0], &[1, 2]).unwrap();
        let i_a_b = mutual_information(&j, &[0], &[1]).unwrap();
        let i_a_c_b = conditional_mutual_information(&j, &[0], &[2], &[1]).unwrap();
        prop_assert!((i_a_bc - i_a_b - i_a_c_b).abs() < 1e-12);
        prop_assert!(i_a_c_b >= -1e-12);
    }

    #[test]
    fn data_processing(p in pmf_strategy(3), rows in prop::collection::vec(pmf_strategy(3), 3),
                       rows2 in prop::collection::vec(pmf_strategy(2), 3)) {
        let j = JointPmf::from_input(&Pmf::new(p).unwrap(), &Channel::new(rows).unwrap())
            .unwrap()
            .extend(1, &Channel::new(rows2).unwrap())
            .unwrap();
        let i_xy = mutual_information(&j, &[0], &[1]).unwrap();
        let i_xz = mutual_information(&j, &[0], &[2]).unwrap();
        prop_assert!(i_xz <= i_xy + 1e-12);
    }

    #[test]
    fn bsc_mutual_information_closed_form(p in crossover(), q in 0.0f64..=1.0) {
        let j = JointPmf::from_input(&Pmf::new(vec![q, 1.0 - q]).unwrap(), &Channel::bsc(p).unwrap()).unwrap();
        let out = q * (1.0 - p) + (1.0 - q) * p;
        let want = binary_entropy(out).unwrap() - binary_entropy(p).unwrap();
        prop_assert!((mutual_information(&j, &[0], &[1]).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn entropy_at_most_log_size(p in pmf_strategy(5)) {
        prop_assert!(entropy(&Pmf::new(p).unwrap()) <= 5f64.log2() + 1e-12);
    }

    #[test]
    fn relabeling_does_not_change_rates(ef in crossover(), df in crossover(), eb in crossover(), db in crossover()) {
        let a = optimize_alpha(&BscSystem::new(ef, df, eb, db).unwrap()).total;
        let b = optimize_alpha(&BscSystem::relabeled(1.0 - ef, 1.0 - df, 1.0 - eb, 1.0 - db).unwrap()).total;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn optimum_dominates_breakpoints_and_fixed_alpha(
        ef in crossover(), df in crossover(), eb in crossover(), db in crossover(), a in 0.0f64..=1.0
    ) {
        let sys = BscSystem::new(ef, df, eb, db).unwrap();
        let best = optimize_alpha(&sys);
        prop_assert!(best.total + 1e-12 >= rate_breakdown(&sys, a).unwrap().total);
        for bp in alpha_breakpoints(&sys) {
            prop_assert!((0.0..=1.0).contains(&bp));
            prop_assert!(best.total + 1e-12 >= rate_breakdown(&sys, bp).unwrap().total);
        }
        prop_assert!(best.total + 1e-12 >= no_feedback_secrecy_capacity(ef, df).unwrap());
        prop_assert!(best.total <= 1.0 + 1e-12);
    }

    #[test]
    fn total_is_concave_in_alpha(
        ef in crossover(), df in crossover(), eb in crossover(), db in crossover(),
        a in 0.0f64..=1.0, b in 0.0f64..=1.0, t in 0.0f64..=1.0
    ) {
        let sys = BscSystem::new(ef, df, eb, db).unwrap();
        let f = |x| rate_breakdown(&sys, x).unwrap().total;
        prop_assert!(f(t * a + (1.0 - t) * b) + 1e-12 >= t * f(a) + (1.0 - t) * f(b));
    }

    #[test]
    fn more_backward_noise_at_eve_helps(eb in crossover(), db in 0.0f64..0.45, bump in 0.0f64..0.05) {
        let lo = backward_key_capacity(&BscSystem::new(0.0, 0.1, eb, db).unwrap());
        let hi = backward_key_capacity(&BscSystem::new(0.0, 0.1, eb, db + bump).unwrap());
        prop_assert!(hi + 1e-12 >= lo);
    }

    #[test]
    fn theorem_reduces_to_no_feedback(e in crossover(), d in crossover()) {
        let spec = FeedbackSystemSpec {
            p_vb: Pmf::degenerate(1, 0).unwrap(),
            ch_xb_given_vb: Channel::new(vec![vec![1.0, 0.0]]).unwrap(),
            ch_yz_b: Channel::bsc_pair(0.1, 0.4).unwrap(),
            p_uf: Pmf::degenerate(1, 0).unwrap(),
            ch_vf_given_uf: Channel::new(vec![vec![0.5, 0.5]]).unwrap(),
            ch_xf_given_vf: Channel::identity(2).unwrap(),
            ch_yz_f: Channel::bsc_pair(e, d).unwrap(),
        };
        let r = theorem1_rate(&spec).unwrap();
        prop_assert!((r.rate - no_feedback_secrecy_capacity(e, d).unwrap()).abs() < 1e-12);
        prop_assert!(r.constraint_ok);
    }
}

#[test]
fn surface_improvement_is_never_negative() {
    let g = linear_grid(0.0, 0.5, 41).unwrap();
    let fixed = SurfaceMode::FixedBackward {
        eps_b: 0.05,
        del_b: 0.3,
    };
    for mode in [SurfaceMode::Symmetric, fixed] {
        for p in rate_surface(&g, &g, mode).unwrap() {
            assert!(p.improvement >= 0.0, "{p:?}");
            assert!((0.0..=1.0).contains(&p.alpha_star));
        }
    }
}

#[test]
fn one_time_pad_leaks_nothing() {
    // Plug-in MI between a biased message bit and its pad ciphertext.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 100_000;
    let msg: Vec<bool> = (0..n).map(|_| rng.random_bool(0.8)).collect();
    let key: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let ct = one_time_pad(&msg, &key).unwrap();
    let mut counts = [0.0; 4];
    for (m, c) in msg.iter().zip(&ct) {
        counts[2 * usize::from(*m) + usize::from(*c)] += 1.0;
    }
    let probs = counts.iter().map(|c| c / n as f64).collect();
    let j = JointPmf::new(vec![2, 2], probs).unwrap();
    let mi = mutual_information(&j, &[0], &[1]).unwrap();
    assert!(mi < 1e-3, "{mi}");
    assert_eq!(one_time_pad(&ct, &key).unwrap(), msg);
}

#[test]
fn noise_sampler_matches_covariance() {
    let p = GaussianWiretapParams::new(1.0, 1.0, 2.0, 0.5, 0.4, -0.3, 0.2).unwrap();
    let c = p.covariance();
    let s = NoiseSampler::new(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 100_000;
    let mut acc = [[0.0; 3]; 3];
    for _ in 0..n {
        let t = s.sample(&mut rng);
        let v = [t.n, t.m, t.s];
        for a in 0..3 {
            for b in 0..3 {
                acc[a][b] += v[a] * v[b];
            }
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            let est = acc[a][b] / n as f64;
            // Var(XY) = C_aa C_bb + C_ab^2 for zero-mean Gaussians.
            let se = ((c[(a, a)] * c[(b, b)] + c[(a, b)].powi(2)) / n as f64).sqrt();
            assert!(
                (est - c[(a, b)]).abs() < 5.0 * se,
                "({a},{b}): {est} vs {}",
                c[(a, b)]
            );
        }
    }
}

#[test]
fn average_power_respects_constraint() {
    let p = GaussianWiretapParams::independent(2.0, 0.5, 1.0, 1.0).unwrap();
    let mc = monte_carlo_sk(&SkConfig::new(p, 10, 1 << 12, 3).unwrap(), 20_000).unwrap();
    for (i, pw) in mc.mean_power.iter().enumerate() {
        assert!(*pw <= 1.05 * 2.0, "use {}: {pw}", i + 1);
    }
}

#[test]
fn near_noiseless_channel_recovers_theta_at_once() {
    let p = GaussianWiretapParams::independent(1.0, 1e-12, 1.0, 1.0).unwrap();
    let t = run_sk(&SkConfig::new(p, 1, 16, 0).unwrap(), 11).unwrap();
    assert!((t.theta_hat[0] - t.theta).abs() < 1e-5);
    assert_eq!(t.decoded, 11);
}

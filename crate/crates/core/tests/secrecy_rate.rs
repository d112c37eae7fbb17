use ansec::an_scheme::{build_precoders, monte_carlo_secrecy};
use ansec::channel::{
    direct_sampling_error, haar_isometry, sample_channel, verify_unitary_invariance_fixed,
    RngStream,
};
use ansec::corr::{build_correlation, CorrelationSpec};
use ansec::numerics::linalg::max_abs;
use ansec::numerics::{hermitian_eig, CMatrix, QuadratureSpec};
use ansec::rate::*;
use ansec::wishart::WishartModel;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Scenarios shared by the inequality and monotonicity checks.
fn scenarios() -> Vec<SystemConfig> {
    let base = SystemConfig::reference();
    let mut out = vec![];
    for db in [0.0, 5.0, 10.0, 20.0] {
        for s1 in 1..=4 {
            out.push(base.with_snr_db(db).with_s1(s1));
        }
    }
    out.push(SystemConfig {
        t: 5,
        r: 7,
        e: 3,
        s1: 2,
        bob: CorrelationSpec::reference(7),
        eve: CorrelationSpec::reference(3),
        ..base.with_snr_db(5.0)
    });
    out.push(SystemConfig {
        eve_corr_known: false,
        ..base
    });
    out
}

/// Bob's antennas practically uncorrelated: every off-diagonal entry below 1e-300.
fn uncorrelated(a: usize) -> CorrelationSpec {
    CorrelationSpec::new(a, 20.0, 90.0, 40.0)
}

#[test]
fn message_and_noise_directions_stay_orthogonal_at_bob() {
    let r = build_correlation(&CorrelationSpec::reference(4)).unwrap();
    let mut rng = RngStream::new(11, 0).rng();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let h = sample_channel(&r, 6, &mut rng);
        let p = build_precoders(&h, 1 + i % 4).unwrap();
        worst = worst.max(max_abs(&((&h * &p.b).adjoint() * (&h * &p.z))));
    }
    assert!(worst < 1e-9, "{worst:e}");
}

#[test]
fn fixed_unitaries_match_direct_sampling() {
    let r = build_correlation(&CorrelationSpec::reference(4)).unwrap();
    let mut rng = RngStream::new(12, 0).rng();
    let trials = 5000;
    let (mut rotated, mut direct) = (0.0, 0.0);
    for _ in 0..20 {
        let f = haar_isometry(6, 3, &mut rng);
        let a = verify_unitary_invariance_fixed(&r, &f, trials, &mut rng).max_cov_error;
        let b = direct_sampling_error(&r, 3, trials, &mut rng).max_cov_error;
        // one bad unitary would stand out on its own
        assert!(a < 0.1, "{a}");
        rotated += a;
        direct += b;
    }
    let ratio = rotated / direct;
    assert!((0.5..=2.0).contains(&ratio), "mean error ratio {ratio}");
}

#[test]
fn exact_rate_agrees_with_simulation() {
    for (i, cfg) in [
        SystemConfig::reference().with_snr_db(5.0).with_s1(2),
        SystemConfig::reference().with_snr_db(20.0).with_s1(4),
        SystemConfig {
            eve_corr_known: false,
            ..SystemConfig::reference()
        },
    ]
    .iter()
    .enumerate()
    {
        let exact = exact_ergodic_secrecy_rate(cfg, &quad()).unwrap();
        let mc = monte_carlo_secrecy(cfg, 20_000, RngStream::new(13, i as u64)).unwrap();
        let z = (exact.unclamped() - mc.unclamped_mean) / mc.unclamped_stderr;
        assert!(
            z.abs() <= 3.0,
            "{cfg:?}: exact {} mc {} z {z}",
            exact.unclamped(),
            mc.unclamped_mean
        );
        assert!(mc.unclamped_mean <= mc.mean);
        assert!((mc.main_mean - mc.wiretap_mean - mc.unclamped_mean).abs() < 1e-9);
    }
}

#[test]
fn simulation_is_reproducible_and_block_ordered() {
    let cfg = SystemConfig::reference();
    let a = monte_carlo_secrecy(&cfg, 2500, RngStream::new(5, 1)).unwrap();
    let b = monte_carlo_secrecy(&cfg, 2500, RngStream::new(5, 1)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trials, 2500);
    let c = monte_carlo_secrecy(&cfg, 2500, RngStream::new(6, 1)).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn jensen_bound_on_the_main_channel() {
    for cfg in scenarios() {
        let exact = exact_ergodic_secrecy_rate(&cfg, &quad()).unwrap();
        let approx = approx_ergodic_secrecy_rate(&cfg, &quad()).unwrap();
        assert!(
            approx.c_main_ergodic >= exact.c_main_ergodic - 1e-9,
            "{cfg:?}"
        );
    }
}

#[test]
fn approximation_tracks_exact_rate_at_5_db() {
    // the default split of the reference scenario and the single-stream split
    for s1 in [1, 2] {
        let cfg = SystemConfig::reference().with_snr_db(5.0).with_s1(s1);
        let exact = exact_ergodic_secrecy_rate(&cfg, &quad())
            .unwrap()
            .secrecy_rate;
        let approx = approx_ergodic_secrecy_rate(&cfg, &quad())
            .unwrap()
            .secrecy_rate;
        assert!(
            ((approx - exact) / exact).abs() < 0.15,
            "s1={s1}: {approx} vs {exact}"
        );
    }
}

#[test]
fn approximation_with_uncorrelated_eve_uses_binomial_minor_sums() {
    let cfg = SystemConfig {
        eve_corr_known: false,
        ..SystemConfig::reference()
    };
    let b = approx_ergodic_secrecy_rate(&cfg, &quad()).unwrap();
    let rho = cfg.rho();
    let ratio_form = |m: f64| {
        let mut s: f64 = 1.0;
        let mut falling = 1.0;
        for k in 1..=4 {
            falling *= m - (k - 1) as f64;
            let binom = [1.0, 4.0, 6.0, 4.0, 1.0][k];
            s += rho.powi(k as i32) * falling * binom;
        }
        s.log2()
    };
    assert!((b.c_h3 - ratio_form(4.0)).abs() < 1e-12);
    assert!((b.c_h4 - ratio_form(6.0)).abs() < 1e-12);
}

#[test]
fn closed_form_chi1_at_high_snr() {
    let cfg = SystemConfig {
        bob: uncorrelated(4),
        s1: 4,
        ..SystemConfig::reference()
    }
    .with_snr_db(30.0);
    let closed = chi1_high_low_snr(&cfg).unwrap();
    let chi1 = approx_ergodic_secrecy_rate(&cfg, &quad())
        .unwrap()
        .c_main_ergodic;
    assert!((closed - chi1).abs() < 1.0, "{closed} vs {chi1}");
}

#[test]
fn largest_eigenvalue_follows_the_spiked_limit() {
    let (r, t, sigma1) = (100, 400, 3.0);
    let mut rng = RngStream::new(14, 0).rng();
    let scale: Vec<f64> = (0..r).map(|i| if i == 0 { sigma1 } else { 1.0 }).collect();
    let sqrt_r = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        r,
        scale.iter().map(|s| Complex64::new(s.sqrt(), 0.0)),
    ));
    let trials = 20;
    let mut acc = 0.0;
    for _ in 0..trials {
        let h: CMatrix = &sqrt_r * ansec::channel::sample_iid_cn(r, t, &mut rng);
        acc += hermitian_eig(&(&h * h.adjoint()).unscale(t as f64))
            .unwrap()
            .values[0];
    }
    let mean = acc / trials as f64;
    let limit = asymptotic_largest_eigen_mean(r as f64 / t as f64, sigma1).unwrap();
    assert!(((mean - limit) / limit).abs() < 0.05, "{mean} vs {limit}");
}

#[test]
fn rate_grows_with_power() {
    for s1 in 1..=4 {
        let model = ExactRateModel::new(&SystemConfig::reference().with_s1(s1)).unwrap();
        let rates: Vec<f64> = [-5.0, 0.0, 5.0, 10.0, 20.0, 30.0]
            .iter()
            .map(|&db| {
                model
                    .breakdown(s1, db_to_linear(db) / 6.0, &quad())
                    .unwrap()
                    .secrecy_rate
            })
            .collect();
        assert!(rates.windows(2).all(|w| w[1] >= w[0]), "s1={s1}: {rates:?}");
    }
}

#[test]
fn uncorrelated_eve_is_the_worst_case() {
    // correlation at Eve lowers her rate, so assuming none maximizes C_H4
    let q = quad();
    let identity = WishartModel::from_correlation(&ansec::corr::CorrelationMatrix::identity(4), 6)
        .unwrap()
        .capacity(10.0 / 6.0, 4, &q)
        .unwrap();
    for spacing in [0.3, 0.8, 1.5, 3.0] {
        for aoa in [10.0, 30.0, 60.0, 90.0] {
            let cfg = SystemConfig {
                eve: CorrelationSpec::new(4, spacing, aoa, 10.0),
                ..SystemConfig::reference()
            };
            let b = exact_ergodic_secrecy_rate(&cfg, &q).unwrap();
            assert!(
                b.c_h4 <= identity + 1e-9,
                "d={spacing} aoa={aoa}: {} > {identity}",
                b.c_h4
            );
            let worst = exact_ergodic_secrecy_rate(
                &SystemConfig {
                    eve_corr_known: false,
                    ..cfg
                },
                &q,
            )
            .unwrap();
            assert!((worst.c_h4 - identity).abs() < 1e-9);
            assert!(worst.secrecy_rate <= b.secrecy_rate + 1e-9);
        }
    }
}

#[test]
fn best_split_moves_up_with_snr() {
    let base = SystemConfig::reference();
    let at = |db: f64| {
        search_best_s1(&base.with_snr_db(db), &quad())
            .unwrap()
            .s1_star
    };
    assert_eq!(at(5.0), 2);
    assert_eq!(at(10.0), 2);
    assert_eq!(at(20.0), 3);
    assert_eq!(at(25.0), 3);
    assert!(at(-5.0) <= at(30.0));
}

#[test]
fn more_antennas_at_bob_help_every_split() {
    let q = quad();
    // rates[s1 - 1] holds the rate for r = max(s1, 2)..=8
    let mut rates = vec![vec![]; 5];
    for r in 2..=8 {
        let cfg = SystemConfig {
            t: 5,
            r,
            e: 3,
            s1: 1,
            bob: CorrelationSpec::reference(r),
            eve: CorrelationSpec::reference(3),
            ..SystemConfig::reference().with_snr_db(5.0)
        };
        let model = ExactRateModel::new(&cfg).unwrap();
        for s1 in 1..=r.min(5) {
            rates[s1 - 1].push(model.breakdown(s1, cfg.rho(), &q).unwrap().secrecy_rate);
        }
    }
    for (i, row) in rates.iter().enumerate() {
        assert!(row.windows(2).all(|w| w[1] > w[0]), "s1={}: {row:?}", i + 1);
    }
}

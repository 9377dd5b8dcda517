use fresa::profile::{
    initial_profiles, profile_domain, PiecewiseLinearProfile, ProfileLimits, QuadraticSplineProfile, TemperatureProfile,
};
use fresa::Genotype;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Limits wide enough that clamping never kicks in.
const WIDE: ProfileLimits = ProfileLimits { t_min: 1.0, t_max: 10_000.0, delta_t_max: 50.0 };

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for row in (col + 1)..n {
            let factor = a[row][col] / pivot_row[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

/// Coefficients `(a0, a1, a2, b0, b1, b2)` of `p(t) = a0 + a1 t + a2 t²`
/// and `q(t) = b0 + b1 t + b2 t²` meeting the six conditions of the spline:
/// `p(0) = start`, `p'(0) = 0`, `q(1) = end`, `q'(1) = 0`, `p(m) = q(m)`,
/// `p'(m) = q'(m)`.
fn spline_oracle(start: f64, end: f64, m: f64) -> [f64; 6] {
    let a = vec![
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0, 1.0, 2.0],
        vec![1.0, m, m * m, -1.0, -m, -m * m],
        vec![0.0, 1.0, 2.0 * m, 0.0, -1.0, -2.0 * m],
    ];
    let x = solve_linear(a, vec![start, 0.0, end, 0.0, 0.0, 0.0]);
    [x[0], x[1], x[2], x[3], x[4], x[5]]
}

fn spline(start: f64, end: f64, m: f64) -> TemperatureProfile {
    TemperatureProfile::QuadraticSpline(QuadraticSplineProfile::new(start, end, m))
}

fn eval(p: &TemperatureProfile, t: f64) -> f64 {
    p.temperature_at(t, &WIDE).unwrap()
}

#[test]
fn spline_matches_linear_system_oracle() {
    let p = spline(300.0, 400.0, 0.5);
    let c = spline_oracle(300.0, 400.0, 0.5);
    assert!((eval(&p, 0.5) - 350.0).abs() < 1e-12);
    for i in 0..=200 {
        let t = i as f64 / 200.0;
        let oracle = if t <= 0.5 { c[0] + c[1] * t + c[2] * t * t } else { c[3] + c[4] * t + c[5] * t * t };
        assert!((eval(&p, t) - oracle).abs() < 1e-9, "t = {t}");
    }
    // Slopes from the oracle coefficients: zero at both ends, matched at 0.5.
    assert!(c[1].abs() < 1e-12);
    assert!((c[4] + 2.0 * c[5]).abs() < 1e-9);
    assert!(((c[1] + 2.0 * c[2] * 0.5) - (c[4] + 2.0 * c[5] * 0.5)).abs() < 1e-9);
}

#[test]
fn spline_geometry_holds_for_random_parameters() {
    let limits = ProfileLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let h = 1e-6;
    for _ in 0..1000 {
        let start = rng.gen_range(limits.t_min..=limits.t_max);
        let end = rng.gen_range(limits.t_min..=limits.t_max);
        let m = rng.gen_range(0.25..=0.75);
        let p = spline(start, end, m);
        let c = spline_oracle(start, end, m);
        let left = |t: f64| c[0] + c[1] * t + c[2] * t * t;
        let right = |t: f64| c[3] + c[4] * t + c[5] * t * t;
        let d_left = |t: f64| c[1] + 2.0 * c[2] * t;
        let d_right = |t: f64| c[4] + 2.0 * c[5] * t;

        assert!((left(m) - right(m)).abs() < 1e-9);
        assert!((d_left(m) - d_right(m)).abs() < 1e-9);
        assert!(d_left(0.0).abs() < 1e-9 && d_right(1.0).abs() < 1e-9);

        // The closed form agrees with the oracle pieces.
        for t in [0.0, 0.5 * m, m, 0.5 * (m + 1.0), 1.0] {
            let oracle = if t <= m { left(t) } else { right(t) };
            assert!((eval(&p, t) - oracle).abs() < 1e-9);
        }
        // One-sided difference quotients of the decoded profile.
        let slope_in = (eval(&p, m) - eval(&p, m - h)) / h;
        let slope_out = (eval(&p, m + h) - eval(&p, m)) / h;
        assert!((slope_in - slope_out).abs() < 1e-3 * (1.0 + (end - start).abs()));
    }
}

#[test]
fn both_initial_points_decode_to_the_same_constant() {
    let limits = ProfileLimits::default();
    let profiles = initial_profiles();
    for i in 0..=1000 {
        let t = i as f64 / 1000.0;
        let values: Vec<f64> = profiles.iter().map(|p| p.temperature_at(t, &limits).unwrap()).collect();
        assert_eq!(values, vec![323.0, 323.0]);
    }
}

#[test]
fn runner_step_shrinks_with_fitness() {
    let domain = profile_domain(ProfileLimits::default());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for parent in initial_profiles() {
        let mean_step = |fitness: f64, rng: &mut ChaCha8Rng| {
            let x = parent.coordinates();
            let total: f64 = (0..10_000)
                .map(|_| {
                    let y = parent.neighbour(fitness, &domain, rng).coordinates();
                    x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum::<f64>()
                })
                .sum();
            total / 10_000.0
        };
        let fit = mean_step(0.9, &mut rng);
        let unfit = mean_step(0.1, &mut rng);
        assert!(fit < unfit, "{}: {fit} vs {unfit}", parent.tag());
    }
}

fn any_profile() -> impl Strategy<Value = TemperatureProfile> {
    let limits = ProfileLimits::default();
    prop_oneof![
        (limits.t_min..=limits.t_max, limits.t_min..=limits.t_max, 0.25f64..=0.75)
            .prop_map(|(a, b, m)| spline(a, b, m)),
        (limits.t_min..=limits.t_max, prop::collection::vec(0.0f64..=1.0, 4), prop::collection::vec(-1.0f64..=1.0, 4))
            .prop_map(|(t0, ft, dt)| TemperatureProfile::PiecewiseLinear(
                PiecewiseLinearProfile::new(ft, dt, t0).unwrap()
            )),
    ]
}

proptest! {
    #[test]
    fn neighbours_stay_in_domain_and_keep_representation(
        p in any_profile(),
        fitness in 0.001f64..0.999,
        seed in any::<u64>(),
    ) {
        let domain = profile_domain(ProfileLimits::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let runner = p.neighbour(fitness, &domain, &mut rng);
            prop_assert_eq!(runner.tag(), p.tag());
            prop_assert!(domain.contains(&runner));
        }
    }

    #[test]
    fn decoded_temperature_stays_within_limits(p in any_profile(), t in 0.0f64..=1.0) {
        let limits = ProfileLimits::default();
        let v = p.temperature_at(t, &limits).unwrap();
        prop_assert!(v >= limits.t_min && v <= limits.t_max);
    }

    #[test]
    fn piecewise_decode_is_continuous_and_starts_at_initial_temperature(
        t0 in 300.0f64..=390.0,
        ft in prop::collection::vec(0.05f64..=1.0, 4),
        dt in prop::collection::vec(-1.0f64..=1.0, 4),
        t in 0.0f64..0.999,
    ) {
        // Steepest segment, from lengths computed independently of the decoder.
        let mut remaining = 1.0;
        let mut max_slope: f64 = 0.0;
        for (f, d) in ft.iter().zip(&dt) {
            let length = f * remaining;
            remaining -= length;
            max_slope = max_slope.max(d.abs() * WIDE.delta_t_max / length);
        }
        let p = TemperatureProfile::PiecewiseLinear(PiecewiseLinearProfile::new(ft, dt, t0).unwrap());
        prop_assert_eq!(eval(&p, 0.0), t0);
        let eps = 1e-7;
        prop_assert!((eval(&p, t + eps) - eval(&p, t)).abs() <= max_slope * eps * 1.001 + 1e-9);
    }

    #[test]
    fn encoding_round_trips_to_ten_digits(p in any_profile()) {
        let decoded: TemperatureProfile = p.encode().parse().unwrap();
        prop_assert_eq!(decoded.tag(), p.tag());
        for (a, b) in p.coordinates().iter().zip(decoded.coordinates()) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300));
        }
        prop_assert_eq!(decoded.encode(), p.encode());
    }
}

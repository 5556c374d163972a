use loopcocycle::density::*;

/// Below this, sup-errors are f64 round-off and carry no ordering information.
const FLOOR: f64 = 1e-12;

#[test]
fn spectral_convergence_witness() {
    for name in ["exp-sin", "exp-sin-cos-2d"] {
        let f = SmoothTestFunction::by_name(name).unwrap();
        let err = |n| ck_error(&f, &fourier_truncate(&f, n), 0, 128).errors[0];
        let e: Vec<f64> = [4, 8, 16, 32, 64].iter().map(|&n| err(n)).collect();
        assert!(e[4] <= 1e-8, "{name}: {e:?}");
        for i in 0..3 {
            if e[i] > FLOOR {
                assert!(e[i + 1] < e[i] / 10.0, "{name}: {e:?}");
            } else {
                assert!(e[i + 1] <= FLOOR, "{name}: {e:?}");
            }
        }
    }
}

#[test]
fn truncation_error_is_monotone_in_n() {
    for name in SmoothTestFunction::NAMES {
        let f = SmoothTestFunction::by_name(name).unwrap();
        let e: Vec<f64> = [0, 2, 4, 8, 16].iter().map(|&n| ck_error(&f, &fourier_truncate(&f, n), 0, 64).errors[0]).collect();
        for w in e.windows(2) {
            assert!(w[1] <= w[0] + FLOOR, "{name}: {e:?}");
        }
    }
}

#[test]
fn derivative_orders_are_reported_monotonically() {
    for name in ["exp-sin", "exp-sin-cos-2d"] {
        let f = SmoothTestFunction::by_name(name).unwrap();
        let r = ck_error(&f, &fourier_truncate(&f, 6), 2, 64);
        assert!(r.ck(0) <= r.ck(1) && r.ck(1) <= r.ck(2), "{name}: {:?}", r.errors);
    }
}

#[test]
fn grid_adequacy() {
    for name in SmoothTestFunction::NAMES {
        let f = SmoothTestFunction::by_name(name).unwrap();
        for n in [8, 16] {
            let p = fourier_truncate(&f, n);
            let coarse = ck_error(&f, &p, 2, 64);
            let fine = ck_error(&f, &p, 2, 128);
            for (a, b) in coarse.errors.iter().zip(&fine.errors) {
                if a.max(*b) > FLOOR {
                    assert!((a - b).abs() < 0.1 * a.max(*b), "{name} N={n}: {a} vs {b}");
                } else {
                    assert!((a - b).abs() <= FLOOR);
                }
            }
        }
    }
}

#[test]
fn injectivity_witness() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        // a random nonzero combination of cos(mθ), sin(mθ) for m <= 8
        let coeffs: Vec<(f64, f64)> = (0..=8).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let sup = (0..64)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / 64.0;
                coeffs.iter().enumerate().map(|(m, (a, b))| a * (m as f64 * t).cos() + b * (m as f64 * t).sin()).sum::<f64>().abs()
            })
            .fold(0.0, f64::max);
        assert!(sup > 1e-10);
    }
}

#[test]
fn bernstein_ck_error_is_non_increasing() {
    for f in IntervalFunction::NAMES.map(|n| IntervalFunction::by_name(n).unwrap()) {
        for mu in 0..=2 {
            let e: Vec<f64> =
                [16, 32, 64].iter().map(|&n| interval_error(f, &weierstrass_integrate_approx(f, mu, n), mu, 512).ck(mu)).collect();
            for w in e.windows(2) {
                assert!(w[1] <= w[0] + FLOOR, "{} mu={mu}: {e:?}", f.name());
            }
        }
    }
}

#[test]
fn weierstrass_exp_c2_strictly_decreases() {
    let f = IntervalFunction::Exp;
    let e: Vec<f64> = [16, 32, 64].iter().map(|&n| interval_error(f, &weierstrass_integrate_approx(f, 2, n), 2, 512).ck(2)).collect();
    assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
    // Voronovskaya: N (B_N g - g) -> x(1-x) g''/2, and here g = g'' = e^x
    let limit = (0..=10_000).map(|i| i as f64 / 10_000.0).map(|x| x * (1.0 - x) * x.exp() / 2.0).fold(0.0, f64::max);
    for (n, err) in [16.0, 32.0, 64.0].iter().zip(&e) {
        assert!((err * n - limit).abs() < 0.01, "N={n}: N*err = {}, limit {limit}", err * n);
    }
}

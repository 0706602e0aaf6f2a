use std::f64::consts::PI;

use aoasim::geometry::{aoa_jacobian, aoa_to_aod, aod_to_aoa, EllipseGeometry};
use aoasim::montecarlo::{sample_aod, sample_local_aoa};
use aoasim::{
    aod_pdf, delayed_aoa_pdf, von_mises_pdf, Angle, AntennaPattern, CompositeAoa, EllipseSet,
    LocalScattering, Tap, TapProfile,
};
use aoasim_testkit::{
    bessel_i_quadrature, chi_square_gof, integrate_circle, integrate_panels, ks_critical, ks_uniform,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TWO_PI: f64 = 2.0 * PI;

fn ellipse(e: f64) -> EllipseGeometry {
    EllipseGeometry {
        major_axis: 1.0,
        eccentricity: e,
        tap_index: 1,
    }
}

fn cell_probabilities<F: Fn(f64) -> f64>(f: &F, bins: usize) -> Vec<f64> {
    let w = TWO_PI / bins as f64;
    (0..bins)
        .map(|k| {
            let lo = -PI + k as f64 * w;
            integrate_panels(f, lo, lo + w, 4, 1e-13)
        })
        .collect()
}

fn histogram(samples: impl Iterator<Item = f64>, bins: usize) -> Vec<u64> {
    let w = TWO_PI / bins as f64;
    let mut h = vec![0u64; bins];
    for x in samples {
        let k = (((x + PI) / w).floor() as usize).min(bins - 1);
        h[k] += 1;
    }
    h
}

#[test]
fn aod_densities_integrate_to_one() {
    let patterns = [
        AntennaPattern::Omni,
        AntennaPattern::gaussian_degrees(360.0).unwrap(),
        AntennaPattern::gaussian_degrees(60.0).unwrap(),
        AntennaPattern::gaussian_degrees(5.0).unwrap(),
        AntennaPattern::tabulated(
            (0..16)
                .map(|k| {
                    let a = -PI + (k as f64 + 0.5) * TWO_PI / 16.0;
                    (a, a.cos().max(0.0) + 0.1)
                })
                .collect(),
        )
        .unwrap(),
    ];
    for p in &patterns {
        let v = integrate_circle(&|x| aod_pdf(Angle::wrap(x), p), 64, 1e-13);
        assert!((v - 1.0).abs() < 1e-9, "{p:?}: {v}");
    }
}

#[test]
fn gaussian_normalizer_at_full_turn() {
    let p = AntennaPattern::gaussian_degrees(360.0).unwrap();
    let AntennaPattern::Gaussian { sigma, norm, .. } = p else { unreachable!() };
    assert!((sigma - 3.7735).abs() < 1e-4);
    let area = integrate_circle(&|x: f64| (-(x / sigma).powi(2)).exp(), 16, 1e-14);
    assert!((norm - 1.0 / area).abs() < 1e-9 * norm);
    assert_eq!(aod_pdf(Angle::ZERO, &p), norm);
}

#[test]
fn von_mises_normalized_over_range() {
    for &mu in &[0.0, 0.5, 2.0, 10.0, 80.0, 500.0] {
        let v = integrate_circle(&|x| von_mises_pdf(Angle::wrap(x), mu).unwrap(), 128, 1e-13);
        assert!((v - 1.0).abs() < 1e-9, "mu = {mu}: {v}");
    }
}

#[test]
fn delayed_density_normalized_for_all_patterns() {
    for &e in &[0.0, 0.1, 0.5, 0.769, 0.9, 0.99] {
        for p in [
            AntennaPattern::Omni,
            AntennaPattern::gaussian_degrees(180.0).unwrap(),
            AntennaPattern::gaussian_degrees(30.0).unwrap(),
        ] {
            let ell = ellipse(e);
            let v = integrate_circle(&|x| delayed_aoa_pdf(Angle::wrap(x), &ell, &p).unwrap(), 256, 1e-13);
            assert!((v - 1.0).abs() < 1e-8, "e = {e}, {p:?}: {v}");
        }
    }
}

#[test]
fn jacobian_weighted_change_of_variables() {
    // int f_T(phi_T(phi_R)) / J(phi_T(phi_R)) d phi_R = int f_T d phi_T = 1
    let p = AntennaPattern::gaussian_degrees(90.0).unwrap();
    for &e in &[0.3, 0.8] {
        let f = |x: f64| {
            let t = aoa_to_aod(Angle::wrap(x), e).unwrap();
            aod_pdf(t, &p) / aoa_jacobian(t, e).unwrap()
        };
        assert!((integrate_circle(&f, 128, 1e-13) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn composite_with_direct_path() {
    let taps = TapProfile::new(vec![
        Tap { delay: 0.0, power: 0.5, paths: 10 },
        Tap { delay: 0.5e-6, power: 0.3, paths: 10 },
        Tap { delay: 2e-6, power: 0.2, paths: 10 },
    ])
    .unwrap();
    let ells = EllipseSet::from_taps(800.0, &taps).unwrap();
    let local = LocalScattering::new(3.0, 1.0).unwrap();
    let p = AntennaPattern::gaussian_degrees(120.0).unwrap();
    let model = CompositeAoa::new(&ells, &taps, &p, &local).unwrap();
    assert!((model.point_mass() - 0.25).abs() < 1e-15);
    let cont = integrate_circle(&|x| model.density(Angle::wrap(x)), 256, 1e-13);
    assert!((cont - 0.75).abs() < 1e-8, "{cont}");
    for &x in &[0.1, 1.0, 2.5] {
        assert_eq!(model.density(Angle::wrap(x)), model.density(Angle::wrap(-x)));
    }
}

#[test]
fn omni_aod_sampler_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sample_aod(&AntennaPattern::Omni, &mut rng).radians()).collect();
    let d = ks_uniform(&mut xs, -PI, PI);
    assert!(d < ks_critical(n, 0.001), "D = {d}");
}

#[test]
fn von_mises_sampler_uniform_at_zero_concentration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sample_local_aoa(0.0, &mut rng).unwrap().radians()).collect();
    let d = ks_uniform(&mut xs, -PI, PI);
    assert!(d < ks_critical(n, 0.001), "D = {d}");
}

#[test]
fn von_mises_sampler_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1_000_000;
    let (mut s, mut c) = (0.0, 0.0);
    for _ in 0..n {
        let x = sample_local_aoa(5.0, &mut rng).unwrap().radians();
        s += x.sin();
        c += x.cos();
    }
    let mean_angle = s.atan2(c);
    assert!(mean_angle.abs() < 0.01);
    let ratio = bessel_i_quadrature(1, 5.0) / bessel_i_quadrature(0, 5.0);
    assert!((c / n as f64 / ratio - 1.0).abs() < 0.01);
}

#[test]
fn von_mises_sampler_matches_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for &mu in &[0.7, 5.0, 40.0] {
        let bins = 180;
        let h = histogram((0..500_000).map(|_| sample_local_aoa(mu, &mut rng).unwrap().radians()), bins);
        let probs = cell_probabilities(&|x| von_mises_pdf(Angle::wrap(x), mu).unwrap(), bins);
        let out = chi_square_gof(&h, &probs, 0.001);
        assert!(out.passes(), "mu = {mu}: {out:?}");
    }
}

#[test]
fn gaussian_full_turn_sampler_matches_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = AntennaPattern::gaussian_degrees(360.0).unwrap();
    let bins = 360;
    let h = histogram((0..1_000_000).map(|_| sample_aod(&p, &mut rng).radians()), bins);
    let probs = cell_probabilities(&|x| aod_pdf(Angle::wrap(x), &p), bins);
    let out = chi_square_gof(&h, &probs, 0.001);
    assert!(out.passes(), "{out:?}");
}

#[test]
fn tabulated_sampler_matches_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let samples: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let a = -PI + (k as f64 + 1.0) * TWO_PI / 10.0;
            (a, 0.2 + (1.0 + a.cos()) * if a > 0.0 { 1.0 } else { 0.4 })
        })
        .collect();
    let p = AntennaPattern::tabulated(samples).unwrap();
    let bins = 120;
    let h = histogram((0..1_000_000).map(|_| sample_aod(&p, &mut rng).radians()), bins);
    let probs = cell_probabilities(&|x| aod_pdf(Angle::wrap(x), &p), bins);
    let out = chi_square_gof(&h, &probs, 0.001);
    assert!(out.passes(), "{out:?}");
}

#[test]
fn pushed_samples_match_delayed_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = AntennaPattern::gaussian_degrees(120.0).unwrap();
    let e = 0.6;
    let ell = ellipse(e);
    let bins = 360;
    let h = histogram(
        (0..1_000_000).map(|_| aod_to_aoa(sample_aod(&p, &mut rng), e).unwrap().radians()),
        bins,
    );
    let probs = cell_probabilities(&|x| delayed_aoa_pdf(Angle::wrap(x), &ell, &p).unwrap(), bins);
    let out = chi_square_gof(&h, &probs, 0.001);
    assert!(out.passes(), "{out:?}");
}

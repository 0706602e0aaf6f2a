//! Per-trial generation of arrival angles and path powers.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::angular_models::{check_concentration, AntennaPattern};
use crate::error::{Error, Result};
use crate::experiment::Scenario;
use crate::geometry::aod_to_aoa;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub tap_index: usize,
    pub aoa: Angle,
    pub power: f64,
    pub is_direct: bool,
}

/// All paths generated in one Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    pub paths: Vec<PathSample>,
    pub scenario_digest: u64,
    pub trial_seed: u64,
}

impl PathSet {
    pub fn total_power(&self) -> f64 {
        self.paths.iter().map(|p| p.power).sum()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Draws a departure angle from the pattern's AOD density.
///
/// The Gaussian case rejects draws of `N(0, sigma / sqrt 2)` outside
/// (-pi, pi], which is exact for the truncated target.
pub fn sample_aod<R: Rng + ?Sized>(pattern: &AntennaPattern, rng: &mut R) -> Angle {
    match pattern {
        AntennaPattern::Omni => uniform_angle(rng),
        AntennaPattern::Gaussian { sigma, .. } => {
            let std = sigma / std::f64::consts::SQRT_2;
            loop {
                let z: f64 = rng.sample(StandardNormal);
                let x = z * std;
                if x.abs() <= PI {
                    return Angle::wrap(x);
                }
            }
        }
        AntennaPattern::Tabulated(t) => {
            let u_segment: f64 = rng.random();
            let u_inner: f64 = rng.random();
            t.sample_with(u_segment, u_inner)
        }
    }
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> Angle {
    // u in [0, 1) gives pi - 2pi u in (-pi, pi]
    let u: f64 = rng.random();
    Angle::wrap(PI - 2.0 * PI * u)
}

/// von Mises(0, mu) variate by the Best-Fisher wrapped-Cauchy envelope.
pub fn sample_local_aoa<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> Result<Angle> {
    check_concentration(mu)?;
    if mu == 0.0 {
        return Ok(uniform_angle(rng));
    }
    let s = if mu < 1e-5 {
        // second-order expansion; the closed form cancels catastrophically here
        1.0 / mu + mu
    } else {
        let r = 1.0 + (1.0 + 4.0 * mu * mu).sqrt();
        let rho = (r - (2.0 * r).sqrt()) / (2.0 * mu);
        (1.0 + rho * rho) / (2.0 * rho)
    };
    loop {
        let u: f64 = rng.random();
        let z = (PI * u).cos();
        let w = (1.0 + s * z) / (s + z);
        let y = mu * (s - w);
        let v: f64 = rng.random();
        if y * (2.0 - y) - v >= 0.0 || (y / v).ln() + 1.0 - y >= 0.0 {
            let theta = w.clamp(-1.0, 1.0).acos();
            let sign: f64 = rng.random();
            return Ok(Angle::wrap(if sign < 0.5 { -theta } else { theta }));
        }
    }
}

fn check_power(power: f64, paths: usize) -> Result<()> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::param("power", format!("must be finite and > 0, got {power}")));
    }
    if paths == 0 {
        return Err(Error::param("paths", "path count must be >= 1"));
    }
    Ok(())
}

/// `paths` independent powers uniform on `[0, 2 P / M)`; their expected sum is `P`.
pub fn sample_tap_powers<R: Rng + ?Sized>(power: f64, paths: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_power(power, paths)?;
    Ok(uniform_powers(2.0 * power / paths as f64, paths, rng))
}

/// Local-scattering powers, uniform on `[0, 2 P0 / ((1 + kappa) M0))`, so the
/// scattered share of the zero-delay tap is `P0 / (1 + kappa)` on average.
pub fn sample_local_powers<R: Rng + ?Sized>(
    power: f64,
    paths: usize,
    kappa: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_power(power, paths)?;
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::param("kappa", format!("must be finite and >= 0, got {kappa}")));
    }
    Ok(uniform_powers(2.0 * power / ((1.0 + kappa) * paths as f64), paths, rng))
}

fn uniform_powers<R: Rng + ?Sized>(upper: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| upper * rng.random::<f64>()).collect()
}

/// Seed of the RNG stream owned by one trial.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ trial_index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates the path set of trial `trial_index`.
///
/// Tap 0 contributes `M_0` von Mises paths; a deterministic direct path at
/// zero with power `kappa P_0 / (1 + kappa)` follows when `kappa > 0`; each
/// delayed tap `i` contributes `M_i` paths whose AOD is drawn from the pattern
/// and mapped through ellipse `i`.
pub fn generate_trial(scenario: &Scenario, trial_index: u64) -> Result<PathSet> {
    let seed = trial_seed(scenario.master_seed(), trial_index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taps = scenario.taps().taps();
    let local = scenario.local();
    let mut paths = Vec::with_capacity(scenario.taps().total_paths() + 1);

    let tap0 = &taps[0];
    let powers = sample_local_powers(tap0.power, tap0.paths, local.kappa, &mut rng)?;
    for power in powers {
        let aoa = sample_local_aoa(local.mu, &mut rng)?;
        paths.push(PathSample {
            tap_index: 0,
            aoa,
            power,
            is_direct: false,
        });
    }
    if local.kappa > 0.0 {
        paths.push(PathSample {
            tap_index: 0,
            aoa: Angle::ZERO,
            power: local.kappa * tap0.power / (1.0 + local.kappa),
            is_direct: true,
        });
    }

    for (tap, ellipse) in taps[1..].iter().zip(scenario.ellipses().iter()) {
        let powers = sample_tap_powers(tap.power, tap.paths, &mut rng)?;
        for power in powers {
            let aod = sample_aod(scenario.pattern(), &mut rng);
            paths.push(PathSample {
                tap_index: ellipse.tap_index,
                aoa: aod_to_aoa(aod, ellipse.eccentricity)?,
                power,
                is_direct: false,
            });
        }
    }

    Ok(PathSet {
        paths,
        scenario_digest: scenario.digest(),
        trial_seed: seed,
    })
}

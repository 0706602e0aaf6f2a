//! Scenario description, tap extraction and multi-trial orchestration.
//!
//! Scenario files are JSON with angles in degrees, delays in microseconds
//! and linear powers. Tap powers are normalized to sum to one when a
//! [`Scenario`] is built; the [`ScenarioConfig`] keeps the values as written.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular_models::{AntennaPattern, LocalScattering, Tap, TapProfile};
use crate::error::{Error, Result};
use crate::estimation::{average_spectra, estimate_pdf, rms_angle_spread, AngularSpectrum, MIN_BINS};
use crate::geometry::EllipseSet;
use crate::montecarlo::generate_trial;

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_BINS: usize = 360;
pub const DEFAULT_PATHS: usize = 50;
pub const DEFAULT_PROMINENCE_DB: f64 = 3.0;

/// HPBW values of the standard sweep, degrees.
pub const STANDARD_HPBW_SWEEP: [f64; 5] = [360.0, 180.0, 120.0, 90.0, 60.0];

fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_bins() -> usize {
    DEFAULT_BINS
}
fn default_paths() -> usize {
    DEFAULT_PATHS
}
fn default_prominence() -> f64 {
    DEFAULT_PROMINENCE_DB
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PatternConfig {
    Omni,
    Gaussian { hpbw_deg: f64 },
    /// `[angle_deg, amplitude]` pairs.
    Tabulated { samples: Vec<[f64; 2]> },
}

impl PatternConfig {
    pub fn build(&self) -> Result<AntennaPattern> {
        match self {
            PatternConfig::Omni => Ok(AntennaPattern::Omni),
            PatternConfig::Gaussian { hpbw_deg } => AntennaPattern::gaussian_degrees(*hpbw_deg),
            PatternConfig::Tabulated { samples } => AntennaPattern::tabulated(
                samples.iter().map(|[a, g]| (a.to_radians(), *g)).collect(),
            ),
        }
    }

    fn from_pattern(pattern: &AntennaPattern) -> Self {
        match pattern {
            AntennaPattern::Omni => PatternConfig::Omni,
            AntennaPattern::Gaussian { hpbw, .. } => PatternConfig::Gaussian {
                hpbw_deg: hpbw.to_degrees(),
            },
            AntennaPattern::Tabulated(t) => PatternConfig::Tabulated {
                samples: t.samples().map(|(a, g)| [a.to_degrees(), g]).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TapConfig {
    pub delay_us: f64,
    pub power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdpSample {
    pub delay_us: f64,
    pub power: f64,
}

/// Scenario file contents. Exactly one of `taps` and `raw_pdp` must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Tx-Rx distance in meters.
    pub distance_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taps: Option<Vec<TapConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_pdp: Option<Vec<PdpSample>>,
    pub pattern: PatternConfig,
    #[serde(default)]
    pub kappa: f64,
    pub mu: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub seed: u64,
    /// Path count for taps that do not specify one.
    #[serde(default = "default_paths")]
    pub default_paths: usize,
    /// Peak prominence threshold used when extracting taps from `raw_pdp`.
    #[serde(default = "default_prominence")]
    pub prominence_db: f64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Validated scenario in SI units, ready for simulation.
#[derive(Debug, Clone)]
pub struct Scenario {
    config: ScenarioConfig,
    distance: f64,
    taps: TapProfile,
    ellipses: EllipseSet,
    pattern: AntennaPattern,
    local: LocalScattering,
    trials: usize,
    bins: usize,
    master_seed: u64,
    digest: u64,
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig) -> Result<Self> {
        let profile = match (&config.taps, &config.raw_pdp) {
            (Some(taps), None) => TapProfile::new(
                taps.iter()
                    .map(|t| Tap {
                        delay: t.delay_us * 1e-6,
                        power: t.power,
                        paths: t.paths.unwrap_or(config.default_paths),
                    })
                    .collect(),
            )?,
            (None, Some(raw)) => {
                let samples: Vec<(f64, f64)> =
                    raw.iter().map(|s| (s.delay_us * 1e-6, s.power)).collect();
                extract_taps(&samples, config.prominence_db, config.default_paths)?
            }
            _ => {
                return Err(Error::Scenario(
                    "exactly one of `taps` and `raw_pdp` must be present".into(),
                ))
            }
        };
        let pattern = config.pattern.build()?;
        let digest = digest_of(&config)?;
        Self::assemble(
            config.clone(),
            config.distance_m,
            profile,
            pattern,
            LocalScattering::new(config.mu, config.kappa)?,
            config.trials,
            config.bins,
            config.seed,
            digest,
        )
    }

    /// Builds a scenario from already-validated parts (delays in seconds).
    pub fn new(
        distance: f64,
        taps: TapProfile,
        pattern: AntennaPattern,
        local: LocalScattering,
        trials: usize,
        bins: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let config = ScenarioConfig {
            label: None,
            distance_m: distance,
            taps: Some(
                taps.taps()
                    .iter()
                    .map(|t| TapConfig {
                        delay_us: t.delay * 1e6,
                        power: t.power,
                        paths: Some(t.paths),
                    })
                    .collect(),
            ),
            raw_pdp: None,
            pattern: PatternConfig::from_pattern(&pattern),
            kappa: local.kappa,
            mu: local.mu,
            trials,
            bins,
            seed: master_seed,
            default_paths: DEFAULT_PATHS,
            prominence_db: DEFAULT_PROMINENCE_DB,
        };
        let digest = digest_of(&config)?;
        Self::assemble(config, distance, taps, pattern, local, trials, bins, master_seed, digest)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        config: ScenarioConfig,
        distance: f64,
        taps: TapProfile,
        pattern: AntennaPattern,
        local: LocalScattering,
        trials: usize,
        bins: usize,
        master_seed: u64,
        digest: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Scenario("trials must be >= 1".into()));
        }
        if bins < MIN_BINS {
            return Err(Error::Scenario(format!("bins must be >= {MIN_BINS}, got {bins}")));
        }
        let taps = taps.normalized();
        let ellipses = EllipseSet::from_taps(distance, &taps)?;
        Ok(Scenario {
            config,
            distance,
            taps,
            ellipses,
            pattern,
            local,
            trials,
            bins,
            master_seed,
            digest,
        })
    }

    /// Same scenario with a different transmit pattern.
    pub fn with_pattern(&self, pattern: AntennaPattern) -> Result<Self> {
        let mut config = self.config.clone();
        config.pattern = PatternConfig::from_pattern(&pattern);
        let digest = digest_of(&config)?;
        Ok(Scenario {
            config,
            pattern,
            digest,
            ..self.clone()
        })
    }

    /// Same scenario with new trial count, bin count or seed.
    pub fn with_run_settings(
        &self,
        trials: Option<usize>,
        bins: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut config = self.config.clone();
        config.trials = trials.unwrap_or(self.trials);
        config.bins = bins.unwrap_or(self.bins);
        config.seed = seed.unwrap_or(self.master_seed);
        let digest = digest_of(&config)?;
        Self::assemble(
            config.clone(),
            self.distance,
            self.taps.clone(),
            self.pattern.clone(),
            self.local,
            config.trials,
            config.bins,
            config.seed,
            digest,
        )
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }
    pub fn distance(&self) -> f64 {
        self.distance
    }
    /// Tap profile with powers normalized to one.
    pub fn taps(&self) -> &TapProfile {
        &self.taps
    }
    pub fn ellipses(&self) -> &EllipseSet {
        &self.ellipses
    }
    pub fn pattern(&self) -> &AntennaPattern {
        &self.pattern
    }
    pub fn local(&self) -> &LocalScattering {
        &self.local
    }
    pub fn trials(&self) -> usize {
        self.trials
    }
    pub fn bins(&self) -> usize {
        self.bins
    }
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }
    pub fn digest(&self) -> u64 {
        self.digest
    }
}

// FNV-1a over the canonical JSON encoding
fn digest_of(config: &ScenarioConfig) -> Result<u64> {
    let bytes = serde_json::to_vec(config)?;
    Ok(bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    }))
}

/// Turns a sampled power delay profile into taps.
///
/// `samples` are `(delay_s, linear_power)` with strictly increasing delays;
/// delays are re-referenced to the first sample, which always becomes tap 0.
/// Interior strict local maxima whose topographic prominence reaches
/// `min_prominence_db` become the delayed taps. Every tap gets `paths` paths.
pub fn extract_taps(samples: &[(f64, f64)], min_prominence_db: f64, paths: usize) -> Result<TapProfile> {
    if samples.len() < 3 {
        return Err(Error::NoTaps(format!("need at least 3 PDP samples, got {}", samples.len())));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::NoTaps(format!(
                "PDP delays must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
    }
    if let Some(&(d, p)) = samples.iter().find(|(d, p)| !d.is_finite() || !p.is_finite() || *p < 0.0) {
        return Err(Error::NoTaps(format!("invalid PDP sample ({d}, {p})")));
    }
    let power: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let n = power.len();

    let boundary_peak = power[0] > power[1];
    let interior: Vec<usize> = (1..n - 1)
        .filter(|&k| power[k] > power[k - 1] && power[k] > power[k + 1])
        .collect();
    if !boundary_peak && interior.is_empty() {
        return Err(Error::NoTaps(
            "PDP has no strict local maximum (flat or monotonically rising)".into(),
        ));
    }

    let origin = samples[0].0;
    let mut taps = vec![Tap {
        delay: 0.0,
        power: power[0],
        paths,
    }];
    for k in interior {
        if prominence_db(&power, k) >= min_prominence_db {
            taps.push(Tap {
                delay: samples[k].0 - origin,
                power: power[k],
                paths,
            });
        }
    }
    TapProfile::new(taps)
}

// Ratio in dB between a peak and the higher of the two minima separating it
// from taller terrain (or the ends of the profile).
fn prominence_db(power: &[f64], k: usize) -> f64 {
    let peak = power[k];
    let left_min = power[..k]
        .iter()
        .rev()
        .take_while(|&&p| p <= peak)
        .fold(peak, |m, &p| m.min(p));
    let right_min = power[k + 1..]
        .iter()
        .take_while(|&&p| p <= peak)
        .fold(peak, |m, &p| m.min(p));
    let base = left_min.max(right_min);
    if base <= 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak / base).log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub averaged_spectrum: AngularSpectrum,
    /// rms angle spread of the averaged spectrum, radians.
    pub angle_spread: f64,
    pub angle_spread_deg: f64,
    pub per_trial_spreads: Vec<f64>,
    /// Standard error of the mean of `per_trial_spreads`.
    pub standard_error: f64,
    /// Spread from the raw path angles of all trials, radians.
    pub raw_path_angle_spread: f64,
    pub scenario_echo: ScenarioConfig,
    /// Wall-clock seconds; not serialized so report files stay reproducible.
    #[serde(skip)]
    pub elapsed: f64,
}

/// Runs every trial of the scenario in parallel and averages the spectra.
pub fn run_simulation(scenario: &Scenario) -> Result<RunReport> {
    run_simulation_with(scenario, Execution::Parallel)
}

struct TrialOutcome {
    spectrum: AngularSpectrum,
    spread: f64,
    // first and second raw angle moments of the power-normalized trial
    moments: (f64, f64),
}

fn run_trial(scenario: &Scenario, index: u64) -> Result<TrialOutcome> {
    let paths = generate_trial(scenario, index)?;
    let spectrum = estimate_pdf(&paths, scenario.bins())?;
    let spread = rms_angle_spread(&spectrum)?;
    let total = paths.total_power();
    let moments = paths.paths.iter().fold((0.0, 0.0), |(m1, m2), p| {
        let w = p.power / total;
        let a = p.aoa.radians();
        (m1 + w * a, m2 + w * a * a)
    });
    Ok(TrialOutcome {
        spectrum,
        spread,
        moments,
    })
}

pub fn run_simulation_with(scenario: &Scenario, execution: Execution) -> Result<RunReport> {
    let start = Instant::now();
    let trials = scenario.trials() as u64;
    let attempt = |i: u64| {
        run_trial(scenario, i).map_err(|e| Error::Trial {
            index: i,
            source: Box::new(e),
        })
    };
    // results come back in trial order either way, so the reduction below is
    // independent of scheduling
    let outcomes: Vec<TrialOutcome> = match execution {
        Execution::Sequential => (0..trials).map(attempt).collect::<Result<_>>()?,
        Execution::Parallel => (0..trials).into_par_iter().map(attempt).collect::<Result<_>>()?,
    };

    let n = outcomes.len() as f64;
    let per_trial_spreads: Vec<f64> = outcomes.iter().map(|o| o.spread).collect();
    let (m1, m2) = outcomes
        .iter()
        .fold((0.0, 0.0), |(a, b), o| (a + o.moments.0, b + o.moments.1));
    let (m1, m2) = (m1 / n, m2 / n);
    let spectra: Vec<AngularSpectrum> = outcomes.into_iter().map(|o| o.spectrum).collect();
    let averaged_spectrum = average_spectra(&spectra)?;
    let angle_spread = rms_angle_spread(&averaged_spectrum)?;

    Ok(RunReport {
        averaged_spectrum,
        angle_spread,
        angle_spread_deg: angle_spread.to_degrees(),
        standard_error: standard_error(&per_trial_spreads),
        per_trial_spreads,
        raw_path_angle_spread: (m2 - m1 * m1).max(0.0).sqrt(),
        scenario_echo: scenario.config().clone(),
        elapsed: start.elapsed().as_secs_f64(),
    })
}

fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub hpbw_deg: f64,
    pub report: RunReport,
}

impl SweepPoint {
    pub fn angle_spread_deg(&self) -> f64 {
        self.report.angle_spread_deg
    }
    pub fn standard_error_deg(&self) -> f64 {
        self.report.standard_error.to_degrees()
    }
}

/// Re-runs the scenario once per Gaussian beamwidth (degrees) with the same seed.
pub fn hpbw_sweep(scenario: &Scenario, hpbw_deg: &[f64], execution: Execution) -> Result<Vec<SweepPoint>> {
    if !matches!(scenario.pattern(), AntennaPattern::Gaussian { .. }) {
        return Err(Error::Scenario("an HPBW sweep needs a Gaussian transmit pattern".into()));
    }
    if hpbw_deg.is_empty() {
        return Err(Error::Scenario("HPBW list is empty".into()));
    }
    hpbw_deg
        .iter()
        .map(|&h| {
            let s = scenario.with_pattern(AntennaPattern::gaussian_degrees(h)?)?;
            Ok(SweepPoint {
                hpbw_deg: h,
                report: run_simulation_with(&s, execution)?,
            })
        })
        .collect()
}

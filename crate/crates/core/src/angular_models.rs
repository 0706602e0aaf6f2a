//! Analytic densities of departure and arrival angles.
//!
//! All densities are per radian on (-pi, pi] and even in their angle
//! argument (patterns are centred on the Tx-Rx boresight).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::geometry::{self, EllipseGeometry, EllipseSet};
use crate::special::{bessel_i0_scaled, erf};

const TWO_PI: f64 = 2.0 * PI;

/// `sigma_T = HPBW / (2 sqrt(ln 2))`, the Gaussian pattern width for a given
/// half-power beamwidth (both in radians).
pub fn sigma_from_hpbw(hpbw: f64) -> Result<f64> {
    check_hpbw(hpbw)?;
    Ok(hpbw / (2.0 * std::f64::consts::LN_2.sqrt()))
}

fn check_hpbw(hpbw: f64) -> Result<()> {
    if hpbw > 0.0 && hpbw <= TWO_PI + 1e-12 {
        Ok(())
    } else {
        Err(Error::param("hpbw", format!("must lie in (0, 2pi], got {hpbw}")))
    }
}

/// Azimuth radiation pattern of the transmit antenna.
#[derive(Debug, Clone, PartialEq)]
pub enum AntennaPattern {
    Omni,
    /// Gaussian power pattern `exp(-phi^2 / sigma^2)` truncated to (-pi, pi].
    Gaussian {
        hpbw: f64,
        sigma: f64,
        /// `1 / (sqrt(pi) sigma erf(pi / sigma))`
        norm: f64,
    },
    Tabulated(TabulatedPattern),
}

impl AntennaPattern {
    pub fn omni() -> Self {
        AntennaPattern::Omni
    }

    pub fn gaussian(hpbw: f64) -> Result<Self> {
        let sigma = sigma_from_hpbw(hpbw)?;
        let norm = 1.0 / (PI.sqrt() * sigma * erf(PI / sigma));
        Ok(AntennaPattern::Gaussian { hpbw, sigma, norm })
    }

    pub fn gaussian_degrees(hpbw_deg: f64) -> Result<Self> {
        Self::gaussian(hpbw_deg.to_radians())
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        TabulatedPattern::new(samples).map(AntennaPattern::Tabulated)
    }

    pub fn hpbw(&self) -> Option<f64> {
        match self {
            AntennaPattern::Gaussian { hpbw, .. } => Some(*hpbw),
            _ => None,
        }
    }
}

/// Amplitude pattern sampled at increasing angles; amplitude is interpolated
/// linearly (periodically across the +-pi seam) and squared to give power.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPattern {
    angles: Vec<f64>,
    amplitudes: Vec<f64>,
    /// Running integral of the squared amplitude at the end of each segment.
    /// Segment `k` spans `angles[k]..angles[k + 1]`; the last one wraps to `angles[0] + 2pi`.
    cumulative: Vec<f64>,
}

impl TabulatedPattern {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < Self::MIN_SAMPLES {
            return Err(Error::Pattern(format!(
                "tabulated pattern needs at least {} samples, got {}",
                Self::MIN_SAMPLES,
                samples.len()
            )));
        }
        let mut prev = -PI;
        for &(angle, amp) in &samples {
            if !(angle > prev && angle <= PI) {
                return Err(Error::Pattern(format!(
                    "angles must be strictly increasing within (-pi, pi], offending value {angle}"
                )));
            }
            if !(amp >= 0.0) || !amp.is_finite() {
                return Err(Error::Pattern(format!("amplitude must be finite and >= 0, got {amp}")));
            }
            prev = angle;
        }
        let (angles, amplitudes): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let n = angles.len();
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for k in 0..n {
            let (width, a, b) = segment(&angles, &amplitudes, k);
            acc += width * (a * a + a * b + b * b) / 3.0;
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Pattern("tabulated pattern is identically zero".into()));
        }
        Ok(TabulatedPattern {
            angles,
            amplitudes,
            cumulative,
        })
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles.iter().copied().zip(self.amplitudes.iter().copied())
    }

    /// Integral of the squared amplitude over one full turn.
    pub fn power_integral(&self) -> f64 {
        *self.cumulative.last().expect("validated non-empty")
    }

    /// Interpolated amplitude at `phi`.
    pub fn amplitude(&self, phi: Angle) -> f64 {
        let (k, t) = self.locate(phi.radians());
        let (_, a, b) = segment(&self.angles, &self.amplitudes, k);
        a + (b - a) * t
    }

    pub fn density(&self, phi: Angle) -> f64 {
        let g = self.amplitude(phi);
        g * g / self.power_integral()
    }

    // Segment index and fractional position of `x` within it.
    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.angles.len();
        let first = self.angles[0];
        // shift into [first, first + 2pi)
        let x = if x < first { x + TWO_PI } else { x };
        let k = match self.angles.partition_point(|&a| a <= x) {
            0 => n - 1,
            p => p - 1,
        };
        let (width, _, _) = segment(&self.angles, &self.amplitudes, k);
        ((k), ((x - self.angles[k]) / width).clamp(0.0, 1.0))
    }

    /// Draws an angle by picking a segment from its power share and inverting
    /// the cubic CDF of the squared linear amplitude inside it.
    pub(crate) fn sample_with(&self, u_segment: f64, u_inner: f64) -> Angle {
        let total = self.power_integral();
        let target = u_segment * total;
        let k = self
            .cumulative
            .partition_point(|&c| c <= target)
            .min(self.angles.len() - 1);
        let (width, a, b) = segment(&self.angles, &self.amplitudes, k);
        let t = if (b - a).abs() <= 1e-12 * a.max(b) {
            u_inner
        } else {
            let a3 = a * a * a;
            let cube = a3 + u_inner * (b * b * b - a3);
            ((cube.cbrt() - a) / (b - a)).clamp(0.0, 1.0)
        };
        Angle::wrap(self.angles[k] + t * width)
    }
}

// (width, amplitude at start, amplitude at end) of segment k
#[inline]
fn segment(angles: &[f64], amps: &[f64], k: usize) -> (f64, f64, f64) {
    let n = angles.len();
    if k + 1 < n {
        (angles[k + 1] - angles[k], amps[k], amps[k + 1])
    } else {
        (angles[0] + TWO_PI - angles[n - 1], amps[n - 1], amps[0])
    }
}

/// Density of the departure angle, `g_T^2(phi) / 2pi` with `g_T` normalized.
pub fn aod_pdf(phi_t: Angle, pattern: &AntennaPattern) -> f64 {
    match pattern {
        AntennaPattern::Omni => 1.0 / TWO_PI,
        AntennaPattern::Gaussian { sigma, norm, .. } => {
            let x = phi_t.radians() / sigma;
            norm * (-x * x).exp()
        }
        AntennaPattern::Tabulated(t) => t.density(phi_t),
    }
}

/// von Mises density `exp(mu cos phi) / (2pi I0(mu))`.
pub fn von_mises_pdf(phi: Angle, mu: f64) -> Result<f64> {
    check_concentration(mu)?;
    Ok(von_mises_unchecked(phi.radians().cos(), mu))
}

#[inline]
fn von_mises_unchecked(cos_phi: f64, mu: f64) -> f64 {
    // exp(mu (cos - 1)) / (2pi e^-mu I0(mu)) avoids overflow for large mu
    (mu * (cos_phi - 1.0)).exp() / (TWO_PI * bessel_i0_scaled(mu))
}

pub(crate) fn check_concentration(mu: f64) -> Result<()> {
    if mu >= 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::param("mu", format!("must be finite and >= 0, got {mu}")))
    }
}

/// Arrival-angle density for one ellipse: the AOD density pulled back through
/// the ellipse mapping, `f_T(phi_T(phi_R)) |d phi_T / d phi_R|`.
pub fn delayed_aoa_pdf(
    phi_r: Angle,
    ellipse: &EllipseGeometry,
    pattern: &AntennaPattern,
) -> Result<f64> {
    let e = ellipse.eccentricity;
    let phi_t = geometry::aoa_to_aod(phi_r, e)?;
    Ok(aod_pdf(phi_t, pattern) * geometry::inverse_jacobian_unchecked(phi_r, e))
}

/// von Mises local scattering around Rx plus the Rician direct-path factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalScattering {
    pub mu: f64,
    pub kappa: f64,
}

impl LocalScattering {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        check_concentration(mu)?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", format!("must be finite and >= 0, got {kappa}")));
        }
        Ok(LocalScattering { mu, kappa })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    /// Excess delay in seconds.
    pub delay: f64,
    /// Mean linear power.
    pub power: f64,
    /// Number of propagation paths arriving with this delay.
    pub paths: usize,
}

/// Delay taps `{tau_i, P_i, M_i}`; tap 0 is the zero-delay (local) tap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Tap>", into = "Vec<Tap>")]
pub struct TapProfile {
    taps: Vec<Tap>,
}

impl TapProfile {
    pub fn new(taps: Vec<Tap>) -> Result<Self> {
        let first = taps
            .first()
            .ok_or_else(|| Error::TapProfile("at least the zero-delay tap is required".into()))?;
        if first.delay != 0.0 {
            return Err(Error::TapProfile(format!("tap 0 must have zero delay, got {}", first.delay)));
        }
        for (i, tap) in taps.iter().enumerate() {
            if !(tap.power > 0.0) || !tap.power.is_finite() {
                return Err(Error::TapProfile(format!("tap {i}: power must be > 0, got {}", tap.power)));
            }
            if tap.paths == 0 {
                return Err(Error::TapProfile(format!("tap {i}: path count must be >= 1")));
            }
            if i > 0 && !(tap.delay > taps[i - 1].delay) {
                return Err(Error::TapProfile(format!("tap {i}: delays must be strictly increasing")));
            }
        }
        Ok(TapProfile { taps })
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    /// Number of delayed taps `N` (excluding tap 0).
    pub fn delayed_count(&self) -> usize {
        self.taps.len() - 1
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.power).sum()
    }

    pub fn total_paths(&self) -> usize {
        self.taps.iter().map(|t| t.paths).sum()
    }

    /// Same profile with powers scaled to sum to one.
    pub fn normalized(&self) -> Self {
        let total = self.total_power();
        TapProfile {
            taps: self
                .taps
                .iter()
                .map(|t| Tap {
                    power: t.power / total,
                    ..*t
                })
                .collect(),
        }
    }

    /// Power-weighted rms delay spread in seconds.
    pub fn rms_delay_spread(&self) -> f64 {
        let total = self.total_power();
        let mean = self.taps.iter().map(|t| t.power * t.delay).sum::<f64>() / total;
        let second = self.taps.iter().map(|t| t.power * t.delay * t.delay).sum::<f64>() / total;
        (second - mean * mean).max(0.0).sqrt()
    }
}

impl TryFrom<Vec<Tap>> for TapProfile {
    type Error = Error;

    fn try_from(taps: Vec<Tap>) -> Result<Self> {
        TapProfile::new(taps)
    }
}

impl From<TapProfile> for Vec<Tap> {
    fn from(p: TapProfile) -> Self {
        p.taps
    }
}

/// The full arrival-angle law: per-ellipse densities weighted by tap power,
/// von Mises local scattering and a direct-path point mass at zero.
#[derive(Debug, Clone)]
pub struct CompositeAoa {
    ellipses: EllipseSet,
    delayed_weights: Vec<f64>,
    local_weight: f64,
    point_mass: f64,
    pattern: AntennaPattern,
    mu: f64,
}

impl CompositeAoa {
    pub fn new(
        ellipses: &EllipseSet,
        taps: &TapProfile,
        pattern: &AntennaPattern,
        local: &LocalScattering,
    ) -> Result<Self> {
        if ellipses.len() != taps.delayed_count() {
            return Err(Error::EllipseCount(ellipses.len(), taps.delayed_count()));
        }
        let total = taps.total_power();
        let p0 = taps.taps()[0].power / total;
        let kappa = local.kappa;
        Ok(CompositeAoa {
            ellipses: ellipses.clone(),
            delayed_weights: taps.taps()[1..].iter().map(|t| t.power / total).collect(),
            local_weight: p0 / (kappa + 1.0),
            point_mass: kappa / (kappa + 1.0) * p0,
            pattern: pattern.clone(),
            mu: local.mu,
        })
    }

    /// Continuous part of the density at `phi_r` (per radian).
    pub fn density(&self, phi_r: Angle) -> f64 {
        let delayed: f64 = self
            .ellipses
            .iter()
            .zip(&self.delayed_weights)
            .map(|(ell, w)| {
                let e = ell.eccentricity;
                // eccentricities were validated when the ellipse set was built
                let phi_t = geometry::aoa_to_aod(phi_r, e).expect("valid eccentricity");
                w * aod_pdf(phi_t, &self.pattern) * geometry::inverse_jacobian_unchecked(phi_r, e)
            })
            .sum();
        delayed + self.local_weight * von_mises_unchecked(phi_r.radians().cos(), self.mu)
    }

    /// Probability carried by the direct path at `phi_r = 0`.
    pub fn point_mass(&self) -> f64 {
        self.point_mass
    }

    /// Mixture weights `(delayed..., local, direct)`; they sum to one.
    pub fn weights(&self) -> (&[f64], f64, f64) {
        (&self.delayed_weights, self.local_weight, self.point_mass)
    }
}

/// Evaluates the composite law at one angle: `(continuous density, point mass at 0)`.
pub fn composite_aoa_pdf(
    phi_r: Angle,
    ellipses: &EllipseSet,
    taps: &TapProfile,
    pattern: &AntennaPattern,
    local: &LocalScattering,
) -> Result<(f64, f64)> {
    let model = CompositeAoa::new(ellipses, taps, pattern, local)?;
    Ok((model.density(phi_r), model.point_mass()))
}

//! Power-weighted angular spectra, rms angle spread and least-square error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::angular_models::CompositeAoa;
use crate::error::{Error, Result};
use crate::montecarlo::PathSet;

const TWO_PI: f64 = 2.0 * PI;

/// Smallest bin count accepted by [`estimate_pdf`].
pub const MIN_BINS: usize = 8;

/// Tolerance on the total probability of a spectrum.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Histogram estimate of the arrival-angle density.
///
/// Bins have equal width over (-pi, pi]; bin `k` covers
/// `[-pi + k w, -pi + (k + 1) w)` with the last bin also holding `pi`.
/// Direct-path power is kept apart as a point mass at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSpectrum {
    /// Density per radian in each bin.
    #[serde(rename = "density_per_rad")]
    pub density: Vec<f64>,
    #[serde(rename = "point_mass_at_zero")]
    pub point_mass: f64,
    pub sample_count: usize,
}

impl AngularSpectrum {
    pub fn bins(&self) -> usize {
        self.density.len()
    }

    pub fn bin_width(&self) -> f64 {
        TWO_PI / self.bins() as f64
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..=self.bins()).map(|k| -PI + k as f64 * w).collect()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        bin_centers(self.bins())
    }

    /// Probability mass of each bin, `density * width`.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        let w = self.bin_width();
        self.density.iter().map(move |d| d * w)
    }

    /// Continuous mass plus the point mass; one for a normalized spectrum.
    pub fn total_probability(&self) -> f64 {
        self.probabilities().sum::<f64>() + self.point_mass
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_probability() - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// Bin holding `phi`.
    pub fn bin_index(&self, phi: Angle) -> usize {
        bin_index(phi.radians(), self.bins())
    }

    /// Spectrum reflected about boresight.
    pub fn mirrored(&self) -> Self {
        let mut density = self.density.clone();
        density.reverse();
        AngularSpectrum { density, ..*self }
    }

    /// `(angle_deg, pdf_per_deg)` rows at the bin centres.
    pub fn degree_rows(&self) -> Vec<(f64, f64)> {
        self.bin_centers()
            .into_iter()
            .zip(&self.density)
            .map(|(c, d)| (c.to_degrees(), d.to_radians()))
            .collect()
    }
}

// Offsets from the middle keep the centres exactly antisymmetric, and put
// the middle bin of an odd count at exactly zero.
fn bin_centers(bins: usize) -> Vec<f64> {
    let w = TWO_PI / bins as f64;
    let half = 0.5 * bins as f64;
    (0..bins).map(|k| (k as f64 + 0.5 - half) * w).collect()
}

#[inline]
fn bin_index(phi: f64, bins: usize) -> usize {
    let k = ((phi + PI) / (TWO_PI / bins as f64)).floor();
    (k.max(0.0) as usize).min(bins - 1)
}

fn check_bins(bins: usize) -> Result<()> {
    if bins < MIN_BINS {
        return Err(Error::param("bins", format!("need at least {MIN_BINS} bins, got {bins}")));
    }
    Ok(())
}

/// Power-weighted histogram of one path set: each bin receives the power of
/// the scattered paths arriving in it, divided by the total power including
/// the direct path, whose share becomes the point mass at zero.
pub fn estimate_pdf(paths: &PathSet, bins: usize) -> Result<AngularSpectrum> {
    check_bins(bins)?;
    let total = paths.total_power();
    if paths.is_empty() || !(total > 0.0) {
        return Err(Error::EmptyPathSet);
    }
    let width = TWO_PI / bins as f64;
    let mut mass = vec![0.0; bins];
    let mut direct = 0.0;
    for p in &paths.paths {
        if p.is_direct {
            direct += p.power;
        } else {
            mass[bin_index(p.aoa.radians(), bins)] += p.power;
        }
    }
    Ok(AngularSpectrum {
        density: mass.into_iter().map(|m| m / total / width).collect(),
        point_mass: direct / total,
        sample_count: paths.len(),
    })
}

/// Bin-wise arithmetic mean of spectra sharing the same binning.
pub fn average_spectra(spectra: &[AngularSpectrum]) -> Result<AngularSpectrum> {
    let first = spectra
        .first()
        .ok_or_else(|| Error::param("spectra", "nothing to average"))?;
    let bins = first.bins();
    let mut density = vec![0.0; bins];
    let mut point_mass = 0.0;
    let mut sample_count = 0;
    for s in spectra {
        if s.bins() != bins {
            return Err(Error::BinMismatch(bins, s.bins()));
        }
        for (acc, d) in density.iter_mut().zip(&s.density) {
            *acc += d;
        }
        point_mass += s.point_mass;
        sample_count += s.sample_count;
    }
    let n = spectra.len() as f64;
    density.iter_mut().for_each(|d| *d /= n);
    Ok(AngularSpectrum {
        density,
        point_mass: point_mass / n,
        sample_count,
    })
}

/// rms angle spread `sqrt(sum phi_k^2 P_k - (sum phi_k P_k)^2)` over bin
/// centres, with linear (not circular) moments. The point mass sits at zero
/// and adds nothing to either moment.
pub fn rms_angle_spread(spectrum: &AngularSpectrum) -> Result<f64> {
    let total = spectrum.total_probability();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Unnormalized(total));
    }
    let (m1, m2) = spectrum
        .bin_centers()
        .into_iter()
        .zip(spectrum.probabilities())
        .fold((0.0, 0.0), |(m1, m2), (c, p)| (m1 + c * p, m2 + c * c * p));
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

/// rms angle spread computed directly from the path angles of all trials,
/// each trial's powers normalized to one so that trials weigh equally.
pub fn raw_path_angle_spread(trials: &[PathSet]) -> Result<f64> {
    if trials.is_empty() {
        return Err(Error::EmptyPathSet);
    }
    let n = trials.len() as f64;
    let (mut m1, mut m2) = (0.0, 0.0);
    for t in trials {
        let total = t.total_power();
        if t.is_empty() || !(total > 0.0) {
            return Err(Error::EmptyPathSet);
        }
        for p in &t.paths {
            let w = p.power / total / n;
            let a = p.aoa.radians();
            m1 += w * a;
            m2 += w * a * a;
        }
    }
    Ok((m2 - m1 * m1).max(0.0).sqrt())
}

/// Anything that yields a density (per radian) at an arrival angle.
pub trait DensityModel {
    fn density_at(&self, phi: Angle) -> f64;
}

impl DensityModel for AngularSpectrum {
    fn density_at(&self, phi: Angle) -> f64 {
        self.density[self.bin_index(phi)]
    }
}

impl DensityModel for CompositeAoa {
    fn density_at(&self, phi: Angle) -> f64 {
        self.density(phi)
    }
}

impl<F: Fn(Angle) -> f64> DensityModel for F {
    fn density_at(&self, phi: Angle) -> f64 {
        self(phi)
    }
}

/// Unweighted sum of squared differences between the model density and the
/// empirical densities at the empirical angles (radians, per radian).
pub fn lse<M: DensityModel + ?Sized>(model: &M, empirical: &[(f64, f64)]) -> Result<f64> {
    if empirical.is_empty() {
        return Err(Error::param("empirical", "no samples"));
    }
    empirical.iter().try_fold(0.0, |acc, &(angle, density)| {
        let phi = Angle::checked(angle)?;
        let d = model.density_at(phi) - density;
        Ok(acc + d * d)
    })
}

//! Confocal-ellipse geometry and the departure-to-arrival angle mapping.
//!
//! Angles are measured at each terminal from the line joining Tx and Rx:
//! `phi_T = 0` points from Tx towards Rx and `phi_R = 0` from Rx towards Tx.
//! For a scatterer on an ellipse of eccentricity `e` with both terminals at
//! the foci,
//!
//! ```text
//! cos phi_R = (2e + (1 + e^2) cos phi_T) / (1 + e^2 + 2e cos phi_T)
//! ```
//!
//! which is the half-angle relation `tan(phi_R / 2) = (1 - e)/(1 + e) * tan(phi_T / 2)`.
//! The half-angle form is what gets evaluated: it keeps full relative precision
//! near `phi = 0` where `arccos` of a value close to one does not.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::angular_models::TapProfile;
use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseGeometry {
    /// Major axis `2a` in meters.
    pub major_axis: f64,
    pub eccentricity: f64,
    pub tap_index: usize,
}

impl EllipseGeometry {
    pub fn semi_major_axis(&self) -> f64 {
        0.5 * self.major_axis
    }

    pub fn with_tap_index(mut self, tap_index: usize) -> Self {
        self.tap_index = tap_index;
        self
    }
}

/// Ellipse for a delayed tap: `2a = D + c tau`, `e = D / 2a`.
///
/// The returned geometry carries `tap_index = 0`; [`EllipseSet::from_taps`]
/// assigns indices.
pub fn ellipse_params(distance: f64, delay: f64) -> Result<EllipseGeometry> {
    if !(distance >= 0.0) || !distance.is_finite() {
        return Err(Error::param("distance", format!("must be finite and >= 0, got {distance}")));
    }
    if !(delay > 0.0) || !delay.is_finite() {
        return Err(Error::param(
            "delay",
            format!("must be finite and > 0, got {delay} (zero delay is local scattering)"),
        ));
    }
    let major_axis = distance + SPEED_OF_LIGHT * delay;
    Ok(EllipseGeometry {
        major_axis,
        eccentricity: distance / major_axis,
        tap_index: 0,
    })
}

/// One ellipse per delayed tap (`i >= 1`) of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipseSet(pub Vec<EllipseGeometry>);

impl EllipseSet {
    pub fn from_taps(distance: f64, taps: &TapProfile) -> Result<Self> {
        taps.taps()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, tap)| ellipse_params(distance, tap.delay).map(|g| g.with_tap_index(i)))
            .collect::<Result<Vec<_>>>()
            .map(EllipseSet)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EllipseGeometry> {
        self.0.iter()
    }
}

#[inline]
pub(crate) fn check_eccentricity(e: f64) -> Result<()> {
    if (0.0..1.0).contains(&e) {
        Ok(())
    } else {
        Err(Error::Eccentricity(e))
    }
}

/// Maps a departure angle at Tx to the arrival angle at Rx for a scatterer on
/// the ellipse with eccentricity `e`. Odd in `phi_T`; `0` and `pi` are fixed points.
pub fn aod_to_aoa(phi_t: Angle, e: f64) -> Result<Angle> {
    check_eccentricity(e)?;
    Ok(half_angle_map(phi_t, (1.0 - e) / (1.0 + e)))
}

/// Inverse of [`aod_to_aoa`].
pub fn aoa_to_aod(phi_r: Angle, e: f64) -> Result<Angle> {
    check_eccentricity(e)?;
    Ok(half_angle_map(phi_r, (1.0 + e) / (1.0 - e)))
}

// phi -> 2 atan(ratio * tan(phi / 2)), continuous through +-pi.
#[inline]
fn half_angle_map(phi: Angle, ratio: f64) -> Angle {
    let x = phi.radians();
    if x == std::f64::consts::PI {
        return Angle::PI;
    }
    let (s, c) = (0.5 * x).sin_cos();
    Angle::wrap(2.0 * (ratio * s).atan2(c))
}

/// `|d phi_R / d phi_T|` of [`aod_to_aoa`] at `phi_T`:
/// `(1 - e^2) / (1 + e^2 + 2e cos phi_T)`.
pub fn aoa_jacobian(phi_t: Angle, e: f64) -> Result<f64> {
    check_eccentricity(e)?;
    Ok(jacobian_unchecked(phi_t, e))
}

// The denominators are rewritten as (1 - e)^2 + 4e cos^2(phi/2) and
// (1 - e)^2 + 4e sin^2(phi/2): sums of non-negative terms, free of the
// cancellation the cosine form suffers when e is close to one.
#[inline]
pub(crate) fn jacobian_unchecked(phi_t: Angle, e: f64) -> f64 {
    let c = (0.5 * phi_t.radians()).cos();
    (1.0 - e * e) / ((1.0 - e) * (1.0 - e) + 4.0 * e * c * c)
}

/// `|d phi_T / d phi_R|` at the arrival angle `phi_R`, i.e. the reciprocal of
/// [`aoa_jacobian`] at the preimage: `(1 - e^2) / (1 + e^2 - 2e cos phi_R)`.
#[inline]
pub(crate) fn inverse_jacobian_unchecked(phi_r: Angle, e: f64) -> f64 {
    let s = (0.5 * phi_r.radians()).sin();
    (1.0 - e * e) / ((1.0 - e) * (1.0 - e) + 4.0 * e * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    // Literal arccos form with sgn(0) = +1.
    fn aod_to_aoa_arccos(phi_t: f64, e: f64) -> f64 {
        let c = phi_t.cos();
        let ratio = (2.0 * e + (1.0 + e * e) * c) / (1.0 + e * e + 2.0 * e * c);
        let sgn = if phi_t >= 0.0 { 1.0 } else { -1.0 };
        sgn * ratio.clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn ellipse_examples() {
        let g = ellipse_params(0.0, 1e-6).unwrap();
        assert_eq!(g.eccentricity, 0.0);

        let g = ellipse_params(1000.0, 1e-6).unwrap();
        assert!((g.major_axis - 1299.792458).abs() < 1e-9);
        assert!((g.eccentricity - 0.769353).abs() < 1e-6);

        let g = ellipse_params(1000.0, 10e-6).unwrap();
        assert!((g.major_axis - 3997.92458).abs() < 1e-9);
        assert!((g.eccentricity - 0.250130).abs() < 1e-6);
        assert!(g.major_axis >= 1000.0 && g.eccentricity < 1.0);
    }

    #[test]
    fn ellipse_rejects_bad_inputs() {
        assert!(ellipse_params(1000.0, 0.0).is_err());
        assert!(ellipse_params(1000.0, -1e-6).is_err());
        assert!(ellipse_params(-1.0, 1e-6).is_err());
        assert!(ellipse_params(f64::NAN, 1e-6).is_err());
    }

    #[test]
    fn mapping_fixed_points() {
        for &e in &[0.0, 0.3, 0.9, 0.999_999] {
            assert_eq!(aod_to_aoa(Angle::ZERO, e).unwrap().radians(), 0.0);
            assert_eq!(aod_to_aoa(Angle::PI, e).unwrap().radians(), PI);
            assert_eq!(aoa_to_aod(Angle::PI, e).unwrap().radians(), PI);
        }
        for &x in &[-3.0, -1.0, 0.2, 2.5] {
            let a = Angle::wrap(x);
            assert!((aod_to_aoa(a, 0.0).unwrap().radians() - x).abs() < 1e-15);
            assert!((aoa_to_aod(a, 0.0).unwrap().radians() - x).abs() < 1e-15);
        }
    }

    #[test]
    fn worked_example_half_eccentricity() {
        let r = aod_to_aoa(Angle::wrap(FRAC_PI_2), 0.5).unwrap().radians();
        assert!((r.cos() - 0.8).abs() < 1e-14);
        assert!((r - 0.643501).abs() < 1e-6);
        assert!((r - aod_to_aoa_arccos(FRAC_PI_2, 0.5)).abs() < 1e-14);

        let t = aoa_to_aod(Angle::wrap(0.643_501_108_793_284_4), 0.5).unwrap().radians();
        assert!((t - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn eccentricity_rejected_outside_unit_interval() {
        for &e in &[1.0, 1.5, -0.1, f64::NAN] {
            assert!(aod_to_aoa(Angle::ZERO, e).is_err());
            assert!(aoa_to_aod(Angle::ZERO, e).is_err());
            assert!(aoa_jacobian(Angle::ZERO, e).is_err());
        }
    }

    #[test]
    fn jacobian_identity_and_limits() {
        for &x in &[-2.0, 0.0, 1.0, PI] {
            assert_eq!(aoa_jacobian(Angle::wrap(x), 0.0).unwrap(), 1.0);
        }
        let e = 0.5;
        assert!((aoa_jacobian(Angle::ZERO, e).unwrap() - (1.0 - e) / (1.0 + e)).abs() < 1e-15);
        assert!((aoa_jacobian(Angle::PI, e).unwrap() - (1.0 + e) / (1.0 - e)).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_central_difference_at_quarter_turn() {
        let h = 1e-5;
        let e = 0.5;
        let f = |x: f64| aod_to_aoa(Angle::wrap(x), e).unwrap().radians();
        let fd = (f(FRAC_PI_2 + h) - f(FRAC_PI_2 - h)) / (2.0 * h);
        let j = aoa_jacobian(Angle::wrap(FRAC_PI_2), e).unwrap();
        assert!(((j - fd) / fd).abs() < 1e-6);
    }

    #[test]
    fn near_unit_eccentricity_collapses_to_boresight() {
        for i in -300..=300 {
            let x = i as f64 * 0.01;
            let r = aod_to_aoa(Angle::wrap(x), 0.999_999).unwrap().radians();
            assert!(r.abs() < 0.01);
        }
    }

    #[test]
    fn monotone_on_upper_half() {
        for &e in &[0.0, 0.25, 0.769, 0.99] {
            let mut prev = 0.0;
            for k in 1..=1000 {
                let x = PI * k as f64 / 1001.0;
                let r = aod_to_aoa(Angle::wrap(x), e).unwrap().radians();
                assert!(r > prev, "e = {e}, x = {x}");
                prev = r;
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_arccos_form(x in -PI..PI, e in 0.0..0.999f64) {
            prop_assume!(x > -PI);
            let r = aod_to_aoa(Angle::wrap(x), e).unwrap().radians();
            prop_assert!((r - aod_to_aoa_arccos(x, e)).abs() < 1e-7);
        }

        #[test]
        fn compression_and_odd_symmetry(x in -PI..PI, e in 0.0..1.0f64) {
            prop_assume!(x > -PI);
            let r = aod_to_aoa(Angle::wrap(x), e).unwrap().radians();
            let m = aod_to_aoa(Angle::wrap(-x), e).unwrap().radians();
            prop_assert!(r.abs() <= x.abs());
            prop_assert_eq!(m, -r);
        }

        #[test]
        fn round_trip(x in -PI..=PI, e in 0.0..1.0f64) {
            prop_assume!(x > -PI);
            let r = aod_to_aoa(Angle::wrap(x), e).unwrap();
            let back = aoa_to_aod(r, e).unwrap().radians();
            let tol = if PI - x.abs() < 1e-3 { 1e-6 } else { 1e-9 };
            prop_assert!((back - x).abs() < tol, "x = {}, e = {}, back = {}", x, e, back);
        }
    }
}

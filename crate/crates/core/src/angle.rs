use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Azimuth angle in radians, always held in the principal interval (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const PI: Angle = Angle(PI);

    /// Wraps an arbitrary finite angle into (-pi, pi]. `-pi` maps to `pi`.
    pub fn wrap(radians: f64) -> Self {
        if radians > -PI && radians <= PI {
            return Angle(radians);
        }
        let r = radians.rem_euclid(TWO_PI);
        Angle(if r > PI { r - TWO_PI } else { r })
    }

    /// Accepts the value only if it already lies in (-pi, pi].
    pub fn checked(radians: f64) -> Result<Self> {
        if radians > -PI && radians <= PI {
            Ok(Angle(radians))
        } else {
            Err(Error::AngleOutOfRange(radians))
        }
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Self::wrap(degrees.to_radians())
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle::wrap(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

//! Left-invariant SU(2) coframe conventions.
//!
//! The engine works in a coframe `{A dt, B s1, C s2, D s3}` where the `s_i`
//! are left-invariant 1-forms with structure constant `kappa`:
//!
//! ```text
//! ds1 = kappa * s2 ^ s3   (and cyclic permutations)
//! ```
//!
//! The sign of the structure constant is an orientation choice; curvature
//! values do not see it, but the self-dual/anti-self-dual split does. We fix
//! the sign above so that the complex orientation of the Kaehler catalog
//! metrics agrees with the frame orientation `e0 ^ e1 ^ e2 ^ e3`.
//!
//! Nothing in the profile formulas pins `kappa`; a wrong guess silently
//! corrupts every downstream number, so the value used for the metric catalog
//! is calibrated against the Einstein property (see
//! [`crate::verify::calibrate_convention`]) rather than assumed.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

/// Structure constant plus the total volume `int_{S^3} s1 ^ s2 ^ s3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoframeConvention {
    pub kappa: f64,
    pub sigma_volume: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("structure constant must be non-negative, got {0}")]
    NegativeKappa(f64),
    #[error("kappa = 0 is the abelian frame; construct it with CoframeConvention::flat(box_volume)")]
    NeedsBoxVolume,
}

impl CoframeConvention {
    /// Convention for `kappa > 0`. The sigma-volume follows from the scaling
    /// law `s_i -> s_i / c` under `kappa -> c * kappa`: for `kappa = 1` the
    /// Euler-angle forms give `16 pi^2`, so in general `16 pi^2 / kappa^3`.
    pub fn new(kappa: f64) -> Result<Self, FrameError> {
        if kappa < 0.0 {
            return Err(FrameError::NegativeKappa(kappa));
        }
        if kappa == 0.0 {
            return Err(FrameError::NeedsBoxVolume);
        }
        Ok(CoframeConvention {
            kappa,
            sigma_volume: 16.0 * PI * PI / (kappa * kappa * kappa),
        })
    }

    /// Abelian test frame (`ds_i = 0`) over a box of the given volume.
    pub fn flat(box_volume: f64) -> Self {
        CoframeConvention {
            kappa: 0.0,
            sigma_volume: box_volume,
        }
    }

    /// The convention under which the metric catalog is Einstein, as
    /// determined by calibration; kept in sync with the calibration test.
    pub fn calibrated() -> Self {
        CoframeConvention::new(CALIBRATED_KAPPA).expect("calibrated kappa is positive")
    }
}

/// Winner of the Einstein calibration over the candidate conventions.
pub const CALIBRATED_KAPPA: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_volume_scaling() {
        let one = CoframeConvention::new(1.0).unwrap();
        assert!((one.sigma_volume - 16.0 * PI * PI).abs() < 1e-12);
        let two = CoframeConvention::new(2.0).unwrap();
        assert!((two.sigma_volume - 2.0 * PI * PI).abs() < 1e-12);
        // s_i -> s_i / c multiplies the volume by 1/c^3
        let c = 1.7;
        let scaled = CoframeConvention::new(c).unwrap();
        assert!((scaled.sigma_volume * c.powi(3) - one.sigma_volume).abs() < 1e-9);
    }

    #[test]
    fn rejects_negative_kappa() {
        assert!(matches!(
            CoframeConvention::new(-1.0),
            Err(FrameError::NegativeKappa(_))
        ));
    }

    #[test]
    fn flat_frame_needs_explicit_volume() {
        assert!(matches!(
            CoframeConvention::new(0.0),
            Err(FrameError::NeedsBoxVolume)
        ));
        let flat = CoframeConvention::flat(8.0);
        assert_eq!(flat.kappa, 0.0);
        assert_eq!(flat.sigma_volume, 8.0);
    }
}

//! Transmon device table, level formula and phenomenological decoherence.

use serde::{Deserialize, Serialize};

use crate::bloch::{BlochState, Vec3};
use crate::{Error, Result};

/// Qubit parameters as quoted for the device (frequencies in GHz/MHz, times in μs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    #[serde(rename = "f01_ghz")]
    pub f01: f64,
    /// Negative for a transmon.
    #[serde(rename = "anharm_mhz")]
    pub anharmonicity: f64,
    #[serde(rename = "t1_us")]
    pub t1: f64,
    #[serde(rename = "t2star_us")]
    pub t2_star: f64,
    #[serde(rename = "t2echo_us")]
    pub t2_echo: f64,
    #[serde(rename = "readout_ghz")]
    pub readout_freq: f64,
    #[serde(rename = "chi_mhz")]
    pub dispersive_shift: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            f01: 6.203,
            anharmonicity: -236.0,
            t1: 8.3,
            t2_star: 6.8,
            t2_echo: 11.7,
            readout_freq: 6.793,
            dispersive_shift: -0.697,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("f01_ghz", self.f01),
            ("t1_us", self.t1),
            ("t2star_us", self.t2_star),
            ("t2echo_us", self.t2_echo),
            ("readout_ghz", self.readout_freq),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.anharmonicity < 0.0 && self.anharmonicity.is_finite()) {
            return Err(Error::invalid(format!(
                "anharm_mhz must be negative, got {}",
                self.anharmonicity
            )));
        }
        if !self.dispersive_shift.is_finite() {
            return Err(Error::invalid("chi_mhz must be finite"));
        }
        if self.t2_star > 2.0 * self.t1 {
            return Err(Error::invalid(format!(
                "t2star_us = {} exceeds 2·t1_us = {}",
                self.t2_star,
                2.0 * self.t1
            )));
        }
        Ok(())
    }

    /// `E_C/h` in GHz, read off the anharmonicity `-E_C`.
    pub fn charging_energy(&self) -> f64 {
        -self.anharmonicity / 1000.0
    }

    /// `E_J/h` in GHz such that the 0→1 transition sits at `f01`.
    pub fn josephson_energy(&self) -> Result<f64> {
        josephson_energy(self.f01, self.charging_energy())
    }
}

/// Transmon level `E_l ≃ -E_J + √(8 E_J E_C)(l + ½) - (E_C/2)[l(l+1) + ½]`.
///
/// Logs a warning when `E_J/E_C` is outside the transmon window 20..100,
/// where the expansion is no longer trustworthy.
pub fn transmon_level(e_j: f64, e_c: f64, l: u32) -> Result<f64> {
    if !(e_j > 0.0 && e_c > 0.0 && e_j.is_finite() && e_c.is_finite()) {
        return Err(Error::invalid(format!(
            "E_J and E_C must be positive, got {e_j}, {e_c}"
        )));
    }
    let ratio = e_j / e_c;
    if !(20.0..=100.0).contains(&ratio) {
        log::warn!("E_J/E_C = {ratio:.1} is outside the transmon regime 20..100");
    }
    let l = l as f64;
    Ok(-e_j + (8.0 * e_j * e_c).sqrt() * (l + 0.5) - 0.5 * e_c * (l * (l + 1.0) + 0.5))
}

/// Inverts `E_1 - E_0 = √(8 E_J E_C) - E_C` for `E_J`.
pub fn josephson_energy(f01: f64, e_c: f64) -> Result<f64> {
    if !(f01 > 0.0 && e_c > 0.0) {
        return Err(Error::invalid(format!(
            "f01 and E_C must be positive, got {f01}, {e_c}"
        )));
    }
    Ok((f01 + e_c).powi(2) / (8.0 * e_c))
}

/// Damps a lab-frame Bloch vector after `elapsed_us` microseconds.
///
/// Transverse components decay as `exp(-t/T2*)`; the z component relaxes to
/// the ground state `+1` as `z(t) = 1 - (1 - z0) exp(-t/T1)`.
pub fn apply_decoherence(b: BlochState, elapsed_us: f64, dev: &DeviceParams) -> Vec3 {
    let v = b.vector();
    let transverse = (-elapsed_us / dev.t2_star).exp();
    let longitudinal = (-elapsed_us / dev.t1).exp();
    Vec3::new(
        v.x * transverse,
        v.y * transverse,
        1.0 - (1.0 - v.z) * longitudinal,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_are_valid_and_serialize_with_unit_names() {
        let dev = DeviceParams::default();
        dev.validate().unwrap();
        let v = serde_json::to_value(dev).unwrap();
        assert_eq!(v["f01_ghz"], 6.203);
        assert_eq!(v["chi_mhz"], -0.697);
        let back: DeviceParams = serde_json::from_value(v).unwrap();
        assert_eq!(back, dev);
    }

    #[test]
    fn rejects_unphysical_coherence() {
        let dev = DeviceParams {
            t2_star: 17.0,
            ..Default::default()
        };
        assert!(dev.validate().is_err());
        let dev = DeviceParams {
            t1: 0.0,
            ..Default::default()
        };
        assert!(dev.validate().is_err());
        let dev = DeviceParams {
            anharmonicity: 236.0,
            ..Default::default()
        };
        assert!(dev.validate().is_err());
    }

    #[test]
    fn anharmonicity_is_minus_charging_energy() {
        for (e_j, e_c) in [(21.96, 0.236), (15.0, 0.3), (40.0, 0.5)] {
            let e: Vec<f64> = (0..3)
                .map(|l| transmon_level(e_j, e_c, l).unwrap())
                .collect();
            assert!(((e[2] - e[1]) - (e[1] - e[0]) + e_c).abs() < 1e-12);
        }
        assert!(transmon_level(0.0, 0.2, 0).is_err());
        assert!(transmon_level(10.0, -0.2, 0).is_err());
    }

    #[test]
    fn device_energies_back_substitute() {
        let dev = DeviceParams::default();
        let e_c = dev.charging_energy();
        let e_j = dev.josephson_energy().unwrap();
        assert!((e_j - 21.960).abs() < 1e-3, "{e_j}");
        assert!((e_j / e_c - 93.05).abs() < 0.01);
        let e: Vec<f64> = (0..3)
            .map(|l| transmon_level(e_j, e_c, l).unwrap())
            .collect();
        assert!(((e[1] - e[0]) - 6.203).abs() / 6.203 < 1e-12);
        assert!((((e[2] - e[1]) - (e[1] - e[0])) * 1000.0 + 236.0).abs() < 1e-9);
    }

    #[test]
    fn decoherence_examples() {
        let dev = DeviceParams::default();
        let b = BlochState::new(Vec3::new(0.3, -0.4, 0.5)).unwrap();
        assert_eq!(apply_decoherence(b, 0.0, &dev), b.vector());
        assert_eq!(apply_decoherence(b, f64::INFINITY, &dev), Vec3::Z);

        let out = apply_decoherence(BlochState::PLUS_X, dev.t2_star, &dev);
        assert!((out.x - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(out.y, 0.0);
        assert!((out.z - (1.0 - (-dev.t2_star / dev.t1).exp())).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn output_stays_in_the_ball(
            x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
            elapsed in 0.0..50.0f64, t1 in 0.5..20.0f64, frac in 0.05..2.0f64,
        ) {
            let b = match BlochState::new(Vec3::new(x, y, z)) {
                Ok(b) => b,
                Err(_) => return Ok(()),
            };
            let dev = DeviceParams { t1, t2_star: frac * t1, ..Default::default() };
            prop_assert!(apply_decoherence(b, elapsed, &dev).norm() <= 1.0 + 1e-12);
        }
    }
}

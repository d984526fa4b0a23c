//! Finite-shot state tomography along the X, Y and Z axes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::bloch::{normalize, BlochState, Vec3};
use crate::numeric::mix64;
use crate::{Error, Result};

/// Measurement protocol: shots per axis, master seed and physical step length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotConfig {
    pub n_shots: u64,
    pub seed: u64,
    /// Duration of one time step in nanoseconds.
    pub step_ns: f64,
}

impl Default for ShotConfig {
    fn default() -> Self {
        ShotConfig {
            n_shots: 5000,
            seed: 0,
            step_ns: 15.0,
        }
    }
}

impl ShotConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_shots == 0 {
            return Err(Error::invalid("n_shots must be at least 1"));
        }
        if !(self.step_ns > 0.0 && self.step_ns.is_finite()) {
            return Err(Error::invalid(format!(
                "step_ns must be positive, got {}",
                self.step_ns
            )));
        }
        Ok(())
    }

    /// Seed of the measurement at mode `mode` and time index `t_index`.
    ///
    /// Depends only on the indices, so any evaluation order gives the same draws.
    pub fn derive_seed(&self, mode: usize, t_index: usize) -> u64 {
        mix64(self.seed ^ mix64(mix64(mode as u64) ^ t_index as u64))
    }
}

/// Averaged outcome of `n_shots` projective measurements per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    /// Raw mean of the ±1 outcomes, not renormalized.
    pub b_est: Vec3,
    /// `b_est / |b_est|`; `None` only when every component averaged to zero.
    pub b_pure: Option<BlochState>,
}

/// Samples the three axis averages of `b_true` with a generator seeded by `seed`.
///
/// Each axis draws `Binomial(n_shots, (1 + b_a)/2)` counts of `+1` outcomes.
pub fn sample_tomography(b_true: Vec3, n_shots: u64, seed: u64) -> Result<Estimate> {
    if n_shots == 0 {
        return Err(Error::invalid("n_shots must be at least 1"));
    }
    if !b_true.is_finite() || b_true.norm() > 1.0 + 1e-9 {
        return Err(Error::invalid(format!(
            "|b_true| must be at most 1, got {}",
            b_true.norm()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_shots as f64;
    let mut axis = |b: f64| -> Result<f64> {
        let p = (0.5 * (1.0 + b)).clamp(0.0, 1.0);
        let dist = Binomial::new(n_shots, p).map_err(|e| Error::invalid(e.to_string()))?;
        let plus = dist.sample(&mut rng) as f64;
        Ok((2.0 * plus - n) / n)
    };
    let b_est = Vec3::new(axis(b_true.x)?, axis(b_true.y)?, axis(b_true.z)?);
    Ok(Estimate {
        b_est,
        b_pure: normalize(b_est).ok(),
    })
}

/// One emulated measurement, stored in the canonical frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TomographyRecord {
    pub k: f64,
    pub t_index: usize,
    pub b_est: Vec3,
    pub b_pure: Option<BlochState>,
    /// Spread of the circumradius estimates of this mode's path.
    pub fluctuation: f64,
    pub n_shots: u64,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_is_deterministic() {
        for seed in 0..20 {
            let e = sample_tomography(Vec3::Z, 37, seed).unwrap();
            assert_eq!(e.b_est.z, 1.0);
        }
        let e = sample_tomography(-Vec3::X, 5, 3).unwrap();
        assert_eq!(e.b_est.x, -1.0);
    }

    #[test]
    fn same_seed_same_draws() {
        let b = Vec3::new(0.3, -0.2, 0.6);
        let a = sample_tomography(b, 5000, 99).unwrap();
        assert_eq!(a, sample_tomography(b, 5000, 99).unwrap());
        assert_ne!(a, sample_tomography(b, 5000, 100).unwrap());
    }

    #[test]
    fn converges_with_many_shots() {
        let b = Vec3::new(0.48, -0.6, 0.64);
        let e = sample_tomography(b, 1_000_000, 7).unwrap();
        assert!(e.b_est.max_abs_diff(b) < 0.005);
        let pure = e.b_pure.unwrap().vector();
        assert!((pure.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn estimate_is_inside_the_cube() {
        let e = sample_tomography(Vec3::new(0.0, 0.0, 0.0), 3, 1).unwrap();
        assert!(e.b_est.norm() <= 3f64.sqrt());
        assert!(e.b_pure.is_some());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sample_tomography(Vec3::new(1.0, 1.0, 0.0), 10, 0).is_err());
        assert!(sample_tomography(Vec3::X, 0, 0).is_err());
        assert!(ShotConfig {
            n_shots: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ShotConfig {
            step_ns: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn derived_seeds_differ_across_cells() {
        let cfg = ShotConfig::default();
        let mut seen = std::collections::HashSet::new();
        for j in 0..30 {
            for i in 0..140 {
                assert!(seen.insert(cfg.derive_seed(j, i)));
            }
        }
    }
}

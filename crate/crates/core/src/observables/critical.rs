//! Critical momenta and times of Ising quenches, and Bloch-sphere coverage.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::bloch::QuenchSpec;
use crate::dynamics::ModeQuench;
use crate::models::ModelParams;
use crate::Result;

/// True when `g_i` and `g_f` lie in different phases: `(1-|g_i|)(1-|g_f|) < 0`.
pub fn dqpt_predicate(g_i: f64, g_f: f64) -> bool {
    (1.0 - g_i.abs()) * (1.0 - g_f.abs()) < 0.0
}

/// Momentum `k* ∈ (0, π)` with `d̂_i(k*)·d̂_f(k*) = 0`, where
/// `cos k* = (1 + g_i g_f)/(g_i + g_f)`.
///
/// Present exactly when [`dqpt_predicate`] holds, which is algebraically the
/// same as `|cos k*| < 1`.
pub fn critical_momentum(g_i: f64, g_f: f64) -> Option<f64> {
    let sum = g_i + g_f;
    if sum == 0.0 || !dqpt_predicate(g_i, g_f) {
        return None;
    }
    let cos_k = ((1.0 + g_i * g_f) / sum).clamp(-1.0, 1.0);
    Some(cos_k.acos())
}

fn ising_gap(g: f64, k: f64) -> f64 {
    ModelParams::Ising { g }.d_vector(k).norm()
}

/// `t_c(n) = (π/|d_f(k*)|)(n + ½)` for `n = 0..=n_max`.
pub fn critical_times(k_star: f64, g_f: f64, n_max: usize) -> Vec<f64> {
    let period = PI / ising_gap(g_f, k_star);
    (0..=n_max).map(|n| period * (n as f64 + 0.5)).collect()
}

/// Critical momentum, DQPT period and critical times of an Ising quench.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalSet {
    pub k_star: Option<f64>,
    /// `π/|d_f(k*)|`; absent without a critical momentum.
    pub period: Option<f64>,
    pub t_c: Vec<f64>,
}

impl CriticalSet {
    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

pub fn critical_set(g_i: f64, g_f: f64, n_max: usize) -> CriticalSet {
    match critical_momentum(g_i, g_f) {
        Some(k) => CriticalSet {
            k_star: Some(k),
            period: Some(PI / ising_gap(g_f, k)),
            t_c: critical_times(k, g_f, n_max),
        },
        None => CriticalSet {
            k_star: None,
            period: None,
            t_c: Vec::new(),
        },
    }
}

/// How much of the Bloch sphere the union of all mode trajectories sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coverage {
    Full,
    PartialHalfOrLess,
}

/// Samples of `k` on `[0, π]` used to look for a sign change of `d̂_i·d̂_f`.
const COVERAGE_SAMPLES: usize = 4096;

/// `Full` iff `d̂_i(k)·d̂_f(k)` changes sign (or vanishes) on `[0, π]`.
pub fn sphere_coverage(spec: &QuenchSpec) -> Result<Coverage> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..=COVERAGE_SAMPLES {
        let k = PI * j as f64 / COVERAGE_SAMPLES as f64;
        let a = ModeQuench::from_models(&spec.pre_quench, &spec.post_quench, k)?.alignment();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let crosses = (lo < 0.0 && hi > 0.0) || lo == 0.0 || hi == 0.0;
    Ok(if crosses {
        Coverage::Full
    } else {
        Coverage::PartialHalfOrLess
    })
}

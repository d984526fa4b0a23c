//! Dynamical Chern number, from the fixed points and from the solid-angle integral.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bloch::{rotate, BlochState, QuenchSpec, Vec3};
use crate::dynamics::ModeQuench;
use crate::models::ModelParams;
use crate::numeric::pairwise_sum;
use crate::{Error, Result};

/// `½(cos θ_0 - cos θ_π)` with `cos θ_k = d̂_i(k)·d̂_f(k)` at the fixed points `k = 0, π`.
pub fn chern_fixed_points_models(pre: &ModelParams, post: &ModelParams) -> Result<i32> {
    let cos_at = |k: f64| ModeQuench::from_models(pre, post, k).map(|m| m.alignment());
    let value = 0.5 * (cos_at(0.0)? - cos_at(PI)?);
    let rounded = value.round();
    if (value - rounded).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "k = 0 and k = π are not fixed points of this quench (half-sum {value})"
        )));
    }
    Ok(rounded as i32)
}

/// Fixed-point Chern number of the Ising quench `g_i → g_f`.
pub fn chern_fixed_points(g_i: f64, g_f: f64) -> Result<i32> {
    chern_fixed_points_models(
        &ModelParams::Ising { g: g_i },
        &ModelParams::Ising { g: g_f },
    )
}

/// Step of the central difference in `k`.
const DK: f64 = 1e-5;

/// State Bloch vector at momentum `k` and rescaled time `t' = |d_f(k)| t`.
fn field(
    pre: &ModelParams,
    post: &ModelParams,
    k: f64,
    t_rescaled: f64,
) -> Result<(BlochState, BlochState)> {
    let m = ModeQuench::from_models(pre, post, k)?;
    Ok((rotate(m.initial(), m.axis(), 2.0 * t_rescaled), m.axis()))
}

/// Midpoint-rule value of `(1/4π) ∫_0^π dk ∫_0^π dt' (b × ∂_t' b)·∂_k b`.
///
/// `b` is the state Bloch vector and `t'` runs over one full precession of every
/// mode. The `t'` derivative is exact (`2 d̂_f × b`); the `k` derivative is a
/// central difference.
pub fn chern_integral(spec: &QuenchSpec, nk: usize, nt: usize) -> Result<f64> {
    if nk < 16 || nt < 16 {
        return Err(Error::invalid(format!(
            "chern integral needs nk, nt >= 16 (got {nk}, {nt})"
        )));
    }
    let (pre, post) = (&spec.pre_quench, &spec.post_quench);
    let dk = PI / nk as f64;
    let dt = PI / nt as f64;
    let rows = (0..nk)
        .into_par_iter()
        .map(|a| -> Result<f64> {
            let k = (a as f64 + 0.5) * dk;
            let mut row = Vec::with_capacity(nt);
            for b in 0..nt {
                let tp = (b as f64 + 0.5) * dt;
                let (s, axis) = field(pre, post, k, tp)?;
                let (plus, _) = field(pre, post, k + DK, tp)?;
                let (minus, _) = field(pre, post, k - DK, tp)?;
                let s: Vec3 = s.vector();
                let d_t = axis.vector().cross(s) * 2.0;
                let d_k = (plus.vector() - minus.vector()) * (0.5 / DK);
                row.push(s.cross(d_t).dot(d_k));
            }
            Ok(pairwise_sum(&row))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&rows) * dk * dt / (4.0 * PI))
}

//! Rate function of the return probability, `f(t) = -(1/N) Σ_k ln |G_k(t)|²`.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{QuenchSpec, TimeGrid};
use crate::dynamics::{evolve, modes, return_probability, ModeQuench};
use crate::models::ModelParams;
use crate::numeric::{fmt_f64, pairwise_sum};
use crate::observables::quadrature;
use crate::Result;

/// Number of momenta behind a rate curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModeCount {
    Finite(usize),
    /// Thermodynamic limit (Brillouin-zone integral).
    Infinite,
}

impl fmt::Display for ModeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeCount::Finite(n) => write!(f, "{n}"),
            ModeCount::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateCurve {
    pub times: Vec<f64>,
    /// `+inf` marks an exact Loschmidt zero on the grid.
    pub values: Vec<f64>,
    pub n_modes: ModeCount,
}

impl RateCurve {
    /// Index of the largest finite-or-infinite value (first one on ties).
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, v) in self.values.iter().enumerate() {
            if best.is_none_or(|b| *v > self.values[b]) {
                best = Some(i);
            }
        }
        best
    }

    /// Writes CSV rows `t,f,n_modes` (header included).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rate_curves_csv(w, std::slice::from_ref(self))
    }
}

/// Writes several curves into one long-format CSV with columns `t,f,n_modes`.
pub fn write_rate_curves_csv<W: Write>(mut w: W, curves: &[RateCurve]) -> Result<()> {
    writeln!(w, "t,f,n_modes")?;
    for c in curves {
        for (t, f) in c.times.iter().zip(&c.values) {
            writeln!(w, "{},{},{}", fmt_f64(*t), fmt_f64(*f), c.n_modes)?;
        }
    }
    Ok(())
}

/// Rate function over a fixed set of modes. Terms are summed pairwise in mode order.
pub fn rate_from_modes(modes: &[ModeQuench], t: f64) -> f64 {
    let mut logs = Vec::with_capacity(modes.len());
    for m in modes {
        let p = return_probability(m, t);
        if p <= 0.0 {
            return f64::INFINITY;
        }
        logs.push(p.ln());
    }
    // adding 0.0 turns the -0.0 of an all-zero sum into +0.0
    -pairwise_sum(&logs) / modes.len() as f64 + 0.0
}

/// `f(t)` from overlaps `b_i·b(t)` (equivalently `d̂_i·d̂(k,t)`), one per mode:
/// `-(1/N) Σ ln[(1 + overlap)/2]`.
pub fn rate_from_overlaps(overlaps: &[f64]) -> f64 {
    let mut logs = Vec::with_capacity(overlaps.len());
    for &x in overlaps {
        let p = 0.5 * (1.0 + x);
        if p <= 0.0 {
            return f64::INFINITY;
        }
        logs.push(p.ln());
    }
    -pairwise_sum(&logs) / overlaps.len() as f64 + 0.0
}

/// Finite-N rate function on the spec's momentum grid.
pub fn rate_function(spec: &QuenchSpec, t: f64) -> Result<f64> {
    Ok(rate_from_modes(&modes(spec)?, t))
}

/// Same quantity evaluated from evolved Bloch vectors instead of the amplitude formula.
pub fn rate_function_states(spec: &QuenchSpec, t: f64) -> Result<f64> {
    let overlaps: Vec<f64> = modes(spec)?
        .iter()
        .map(|m| m.initial().dot(evolve(m, t)))
        .collect();
    Ok(rate_from_overlaps(&overlaps))
}

/// Rate function at every time of the spec's grid.
pub fn rate_curve(spec: &QuenchSpec) -> Result<RateCurve> {
    let modes = modes(spec)?;
    let times = spec.times.times();
    let values = times
        .par_iter()
        .map(|&t| rate_from_modes(&modes, t))
        .collect();
    Ok(RateCurve {
        times,
        values,
        n_modes: ModeCount::Finite(spec.momenta.n_modes()),
    })
}

/// Thermodynamic-limit rate function `-(1/2π) ∫_0^{2π} ln |G_k(t)|² dk`.
///
/// `quad_tol` bounds the estimated absolute error of the returned value.
pub fn rate_function_thermo(
    pre: &ModelParams,
    post: &ModelParams,
    t: f64,
    quad_tol: f64,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let integrand = |k: f64| -> Result<f64> {
        let m = ModeQuench::from_models(pre, post, k)?;
        Ok(return_probability(&m, t).ln())
    };
    // tolerance is on f, i.e. after dividing by 2π
    let (integral, _) = quadrature::integrate(
        integrand,
        0.0,
        TAU,
        quad_tol * TAU,
        16,
        quadrature::MAX_INTERVALS,
    )?;
    Ok(-integral / TAU)
}

pub fn thermo_curve(
    pre: &ModelParams,
    post: &ModelParams,
    times: &TimeGrid,
    quad_tol: f64,
) -> Result<RateCurve> {
    let ts = times.times();
    let values = ts
        .par_iter()
        .map(|&t| rate_function_thermo(pre, post, t, quad_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCurve {
        times: ts,
        values,
        n_modes: ModeCount::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{MomentumGrid, Vec3};
    use crate::models::{CustomTable, TableRow};
    use crate::Error;

    fn ising(g_i: f64, g_f: f64, n: usize) -> QuenchSpec {
        QuenchSpec::ising(
            g_i,
            g_f,
            MomentumGrid::new(n).unwrap(),
            TimeGrid::new(0.0, 0.05, 80).unwrap(),
        )
        .unwrap()
    }

    /// Direct termwise oracle: explicit loop over the grid using the closed form.
    fn termwise(g_i: f64, g_f: f64, n: usize, t: f64) -> f64 {
        let mut acc = 0.0;
        for j in 0..n {
            let k = TAU * j as f64 / n as f64;
            let (s, c) = k.sin_cos();
            let (ni, nf) = (
                (s * s + (g_i - c).powi(2)).sqrt(),
                (s * s + (g_f - c).powi(2)).sqrt(),
            );
            let dot = (s * s + (g_i - c) * (g_f - c)) / (ni * nf);
            let p = (nf * t).cos().powi(2) + dot * dot * (nf * t).sin().powi(2);
            acc += p.ln();
        }
        -acc / n as f64
    }

    #[test]
    fn zero_at_t_zero_and_without_quench() {
        let spec = ising(0.2, 1.5, 30);
        assert_eq!(rate_function(&spec, 0.0).unwrap(), 0.0);
        let same = ising(0.7, 0.7, 30);
        for t in [0.3, 1.1, 7.5] {
            assert!(rate_function(&same, t).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn matches_termwise_oracle() {
        let spec = ising(0.2, 1.5, 30);
        let f = rate_function(&spec, 1.6066).unwrap();
        assert!((f - termwise(0.2, 1.5, 30, 1.6066)).abs() < 1e-12);
        assert!((rate_function_states(&spec, 1.6066).unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn degenerate_mode_names_k() {
        // g_f = 1 closes the gap at k = 0, which is on the grid
        let err = rate_function(&ising(0.2, 1.0, 30), 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateMode { k, role: "post-quench" } if k == 0.0));
    }

    #[test]
    fn exact_zero_gives_infinity() {
        // perpendicular mode: cos(π/2) rounds to 6e-17, so only a huge finite value
        let m = ModeQuench::new(0.0, crate::BlochState::PLUS_X, Vec3::Z).unwrap();
        let f = rate_from_modes(&[m], std::f64::consts::FRAC_PI_2);
        assert!(f.is_finite() && f > 70.0);
        assert_eq!(rate_from_overlaps(&[0.3, -1.0]), f64::INFINITY);
    }

    #[test]
    fn invariant_under_identity_shift() {
        let n = 64;
        let pre = ModelParams::Ising { g: 0.2 };
        let post = ModelParams::Ising { g: 1.5 };
        let table = |m: &ModelParams, d0: &dyn Fn(f64) -> f64| {
            let rows = (0..n)
                .map(|j| {
                    let k = TAU * j as f64 / n as f64;
                    let d = m.d_vector(k);
                    TableRow {
                        k,
                        dx: d.x,
                        dy: d.y,
                        dz: d.z,
                        d0: d0(k),
                    }
                })
                .collect();
            ModelParams::Custom {
                table: CustomTable::new(rows).unwrap(),
            }
        };
        let grid = MomentumGrid::new(n).unwrap();
        let times = TimeGrid::new(0.0, 0.1, 40).unwrap();
        let with = QuenchSpec::new(
            table(&pre, &|k| 0.3 + k.cos()),
            table(&post, &|k| k.sin()),
            grid,
            times,
        )
        .unwrap();
        let without =
            QuenchSpec::new(table(&pre, &|_| 0.0), table(&post, &|_| 0.0), grid, times).unwrap();
        let a = rate_curve(&with).unwrap();
        let b = rate_curve(&without).unwrap();
        assert_eq!(a.values, b.values);
        let ising_curve = rate_curve(&QuenchSpec::ising(0.2, 1.5, grid, times).unwrap()).unwrap();
        for (x, y) in a.values.iter().zip(&ising_curve.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn thermo_limit_is_zero_at_origin_and_finite_at_tc() {
        let pre = ModelParams::Ising { g: 0.2 };
        let post = ModelParams::Ising { g: 1.5 };
        assert_eq!(rate_function_thermo(&pre, &post, 0.0, 1e-9).unwrap(), 0.0);
        let f = rate_function_thermo(&pre, &post, 1.6066, 1e-9).unwrap();
        assert!(f.is_finite() && f > 0.0);
    }

    #[test]
    fn csv_layout() {
        let curve = RateCurve {
            times: vec![0.0, 0.5],
            values: vec![0.0, f64::INFINITY],
            n_modes: ModeCount::Infinite,
        };
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,f,n_modes");
        assert!(lines[2].ends_with(",inf,inf"));
        assert_eq!(curve.argmax(), Some(1));
    }
}

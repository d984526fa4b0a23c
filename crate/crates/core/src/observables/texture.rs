//! Skyrmion texture `s(k,t) = b(k,t)·b_i(k)` over momentum-time space.
//!
//! `s = 1` at `t = 0` and `s = -1` exactly at Loschmidt zeros, so Skyrmion
//! centers sit at `(k*, t_c(n))`.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::QuenchSpec;
use crate::dynamics::{evolve, modes, ModeQuench};
use crate::models::ModelParams;
use crate::numeric::fmt_f64;
use crate::Result;

/// Texture values on the spec's grids; `s` is row-major with one row per momentum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TextureGrid {
    pub k_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub s: Vec<f64>,
}

impl TextureGrid {
    pub fn get(&self, ik: usize, it: usize) -> f64 {
        self.s[ik * self.t_values.len() + it]
    }

    pub fn min(&self) -> f64 {
        self.s.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Long-format CSV `k,t,s`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,t,s")?;
        for (ik, k) in self.k_values.iter().enumerate() {
            for (it, t) in self.t_values.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_f64(*k),
                    fmt_f64(*t),
                    fmt_f64(self.get(ik, it))
                )?;
            }
        }
        Ok(())
    }

    /// Grid points lower than every neighbour (periodic in k, open in t).
    pub fn local_minima(&self) -> Vec<(usize, usize)> {
        let (nk, nt) = (self.k_values.len(), self.t_values.len());
        let mut out = Vec::new();
        for ik in 0..nk {
            for it in 0..nt {
                let v = self.get(ik, it);
                let mut is_min = true;
                'nb: for dk in [nk - 1, 0, 1] {
                    for dt in [-1i64, 0, 1] {
                        if dk == 0 && dt == 0 {
                            continue;
                        }
                        let jt = it as i64 + dt;
                        if jt < 0 || jt >= nt as i64 || nk == 1 && dk != 0 {
                            continue;
                        }
                        let jk = (ik + dk) % nk;
                        if self.get(jk, jt as usize) < v {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    out.push((ik, it));
                }
            }
        }
        out
    }
}

pub fn texture_value(mq: &ModeQuench, t: f64) -> f64 {
    mq.initial().dot(evolve(mq, t))
}

pub fn skyrmion_texture(spec: &QuenchSpec) -> Result<TextureGrid> {
    let modes = modes(spec)?;
    let t_values = spec.times.times();
    let rows: Vec<Vec<f64>> = modes
        .par_iter()
        .map(|m| t_values.iter().map(|&t| texture_value(m, t)).collect())
        .collect();
    Ok(TextureGrid {
        k_values: modes.iter().map(|m| m.k()).collect(),
        t_values,
        s: rows.concat(),
    })
}

/// A refined texture minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SkyrmionCenter {
    pub k: f64,
    pub t: f64,
    pub s: f64,
}

/// Minimum over t of the texture at fixed k: `2 (d̂_i·d̂_f)² - 1`, reached at
/// half-integer multiples of the period.
fn column_floor(pre: &ModelParams, post: &ModelParams, k: f64) -> Result<f64> {
    let a = ModeQuench::from_models(pre, post, k)?.alignment();
    Ok(2.0 * a * a - 1.0)
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Local minima of the sampled texture refined to the continuum and kept when
/// the refined value is at most `level`.
///
/// Refinement minimizes over k within one grid spacing of the sampled minimum,
/// then places t at the nearest half-period of that mode. Centers outside the
/// sampled time window are dropped.
pub fn skyrmion_centers(
    spec: &QuenchSpec,
    grid: &TextureGrid,
    level: f64,
) -> Result<Vec<SkyrmionCenter>> {
    let (pre, post) = (&spec.pre_quench, &spec.post_quench);
    let dk = spec.momenta.spacing();
    let (t_lo, t_hi) = match (grid.t_values.first(), grid.t_values.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(Vec::new()),
    };
    let mut centers: Vec<SkyrmionCenter> = Vec::new();
    for (ik, it) in grid.local_minima() {
        if grid.get(ik, it) >= 0.0 {
            continue;
        }
        let k0 = grid.k_values[ik];
        let k = golden_section(|k| column_floor(pre, post, k), k0 - dk, k0 + dk)?;
        let m = ModeQuench::from_models(pre, post, k)?;
        let n = (grid.t_values[it] / m.period() - 0.5).round().max(0.0);
        let t = m.period() * (n + 0.5);
        let s = texture_value(&m, t);
        if s > level || t < t_lo - 1e-12 || t > t_hi + 1e-12 {
            continue;
        }
        let k = k.rem_euclid(2.0 * PI);
        if centers
            .iter()
            .any(|c| (c.k - k).abs() < 1e-6 && (c.t - t).abs() < 1e-6)
        {
            continue;
        }
        centers.push(SkyrmionCenter { k, t, s });
    }
    centers.sort_by(|a, b| a.k.total_cmp(&b.k).then(a.t.total_cmp(&b.t)));
    Ok(centers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{MomentumGrid, TimeGrid};
    use crate::observables::critical::{critical_momentum, critical_times};

    fn spec(g_i: f64, g_f: f64, grid: MomentumGrid) -> QuenchSpec {
        QuenchSpec::ising(g_i, g_f, grid, TimeGrid::new(0.0, 0.02, 400).unwrap()).unwrap()
    }

    #[test]
    fn first_column_is_one_and_values_bounded() {
        let tex = skyrmion_texture(&spec(0.0, 1.5, MomentumGrid::new(30).unwrap())).unwrap();
        for ik in 0..30 {
            assert!((tex.get(ik, 0) - 1.0).abs() < 1e-15);
        }
        assert!(tex.s.iter().all(|s| s.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn minus_one_at_critical_point() {
        let k = critical_momentum(0.0, 1.5).unwrap();
        let tc = critical_times(k, 1.5, 0)[0];
        let m = ModeQuench::from_models(
            &ModelParams::Ising { g: 0.0 },
            &ModelParams::Ising { g: 1.5 },
            k,
        )
        .unwrap();
        assert!((texture_value(&m, tc) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_centers_without_dqpt() {
        let s = spec(0.0, 0.5, MomentumGrid::new(30).unwrap());
        let tex = skyrmion_texture(&s).unwrap();
        assert!(tex.min() > -1.0);
        assert!(skyrmion_centers(&s, &tex, -1.0 + 1e-6).unwrap().is_empty());
    }

    #[test]
    fn centers_found_on_a_plain_grid() {
        let s = spec(0.0, 1.5, MomentumGrid::new(30).unwrap());
        let tex = skyrmion_texture(&s).unwrap();
        let centers = skyrmion_centers(&s, &tex, -1.0 + 1e-6).unwrap();
        let k = critical_momentum(0.0, 1.5).unwrap();
        let tcs = critical_times(k, 1.5, 2);
        assert!(!centers.is_empty());
        for c in &centers {
            let kk = if c.k > PI { 2.0 * PI - c.k } else { c.k };
            assert!((kk - k).abs() < 1e-6, "{c:?}");
            assert!(tcs.iter().any(|t| (t - c.t).abs() < 1e-6), "{c:?}");
            assert!((c.s + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        let s = QuenchSpec::ising(
            0.0,
            1.5,
            MomentumGrid::new(3).unwrap(),
            TimeGrid::new(0.0, 0.1, 4).unwrap(),
        )
        .unwrap();
        let mut buf = Vec::new();
        skyrmion_texture(&s).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 12);
    }
}

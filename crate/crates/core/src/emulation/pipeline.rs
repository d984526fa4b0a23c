//! End-to-end emulation of a quench experiment on one qubit.
//!
//! Each mode's exact trajectory is mapped to the lab frame (the experimental
//! axis permutation, then a rotation putting the initial state on +X), damped,
//! measured with finite shots, and mapped back to the canonical frame.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{normalize, rotate_vector, BlochState, QuenchSpec, Vec3};
use crate::dynamics::{evolve, modes, ModeQuench};
use crate::emulation::{
    apply_decoherence, error_bar_rate, measured_rate, path_fluctuation, sample_tomography,
    DeviceParams, ShotConfig, TomographyRecord,
};
use crate::models::{from_experimental_frame, to_experimental_frame};
use crate::numeric::fmt_f64;
use crate::observables::{ModeCount, RateCurve};
use crate::Result;

/// Per-mode map between the canonical frame and the qubit's lab frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabFrame {
    axis: BlochState,
    angle: f64,
}

impl LabFrame {
    /// Smallest rotation taking the mode's (permuted) initial state to +X.
    pub fn for_mode(m: &ModeQuench) -> LabFrame {
        let u = to_experimental_frame(m.initial().vector());
        let cross = u.cross(Vec3::X);
        match normalize(cross) {
            Ok(axis) if cross.norm() > 1e-15 => LabFrame {
                axis,
                angle: cross.norm().atan2(u.x),
            },
            // already on the X axis: identity or a half turn about Z
            _ => LabFrame {
                axis: BlochState::PLUS_Z,
                angle: if u.x > 0.0 { 0.0 } else { std::f64::consts::PI },
            },
        }
    }

    pub fn to_lab(&self, v: Vec3) -> Vec3 {
        rotate_vector(to_experimental_frame(v), self.axis, self.angle)
    }

    pub fn to_canonical(&self, v: Vec3) -> Vec3 {
        from_experimental_frame(rotate_vector(v, self.axis, -self.angle))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmulationConfig {
    pub shots: ShotConfig,
    /// `None` switches decoherence off.
    pub device: Option<DeviceParams>,
    /// Triples per path for the fluctuation; `None` means `floor(len/3)`.
    pub n_triples: Option<usize>,
}

/// Records of one emulated run, mode-major (all times of mode 0 first).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Emulation {
    pub records: Vec<TomographyRecord>,
    pub n_modes: usize,
    pub n_times: usize,
}

impl Emulation {
    pub fn record(&self, mode: usize, t_index: usize) -> &TomographyRecord {
        &self.records[mode * self.n_times + t_index]
    }

    /// Rate function of the measured, renormalized states.
    pub fn rate_curve(&self, spec: &QuenchSpec) -> Result<RateCurve> {
        let values = (0..self.n_times)
            .into_par_iter()
            .map(|i| measured_rate(spec, &self.records, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(RateCurve {
            times: spec.times.times(),
            values,
            n_modes: ModeCount::Finite(self.n_modes),
        })
    }

    /// `Δf(t)` at every time index.
    pub fn error_bars(&self, spec: &QuenchSpec) -> Result<Vec<f64>> {
        (0..self.n_times)
            .into_par_iter()
            .map(|i| error_bar_rate(spec, &self.records, i))
            .collect()
    }

    /// CSV `k,t_index,bx_est,by_est,bz_est,fluctuation`.
    pub fn write_records_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,t_index,bx_est,by_est,bz_est,fluctuation")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(r.k),
                r.t_index,
                fmt_f64(r.b_est.x),
                fmt_f64(r.b_est.y),
                fmt_f64(r.b_est.z),
                fmt_f64(r.fluctuation)
            )?;
        }
        Ok(())
    }
}

/// Emulates tomography of every mode at every grid time.
///
/// Physical time is `t · step_ns / dt`, so one grid step lasts `step_ns`.
pub fn emulate(spec: &QuenchSpec, cfg: &EmulationConfig) -> Result<Emulation> {
    cfg.shots.validate()?;
    if let Some(dev) = &cfg.device {
        dev.validate()?;
    }
    let modes = modes(spec)?;
    let times = spec.times.times();
    let us_per_unit = cfg.shots.step_ns / spec.times.dt() / 1000.0;
    let rows = modes
        .par_iter()
        .enumerate()
        .map(|(j, m)| -> Result<Vec<TomographyRecord>> {
            let frame = LabFrame::for_mode(m);
            let mut row = Vec::with_capacity(times.len());
            for (i, &t) in times.iter().enumerate() {
                let state = evolve(m, t);
                let lab = frame.to_lab(state.vector());
                let lab = match &cfg.device {
                    Some(dev) => apply_decoherence(normalize(lab)?, t.max(0.0) * us_per_unit, dev),
                    None => lab,
                };
                let seed = cfg.shots.derive_seed(j, i);
                let est = sample_tomography(lab, cfg.shots.n_shots, seed)?;
                let b_est = frame.to_canonical(est.b_est);
                row.push(TomographyRecord {
                    k: m.k(),
                    t_index: i,
                    b_est,
                    b_pure: normalize(b_est).ok(),
                    fluctuation: 0.0,
                    n_shots: cfg.shots.n_shots,
                    seed,
                });
            }
            let path: Vec<Vec3> = row.iter().map(|r| r.b_est).collect();
            let fluctuation = path_fluctuation(&path, cfg.n_triples)?;
            for r in &mut row {
                r.fluctuation = fluctuation;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Emulation {
        records: rows.concat(),
        n_modes: modes.len(),
        n_times: times.len(),
    })
}

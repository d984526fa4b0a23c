//! The five pipelines. Each fills an [`Outputs`] buffer; nothing touches disk here.

use std::io::Write;

use rayon::prelude::*;

use dqpt_core::dynamics::{trajectories, write_trajectories_csv};
use dqpt_core::emulation::emulate;
use dqpt_core::numeric::fmt_f64;
use dqpt_core::observables::{
    chern_fixed_points, chern_fixed_points_models, chern_integral, critical_set, rate_curve,
    skyrmion_centers, skyrmion_texture, thermo_curve, write_rate_curves_csv, SkyrmionCenter,
};
use dqpt_core::ModelParams;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::output::Outputs;

/// Texture level below which a refined minimum counts as a Skyrmion center.
pub const CENTER_LEVEL: f64 = -1.0 + 1e-6;

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Outputs> {
    match command {
        Command::Trajectory => trajectory(cfg),
        Command::Rate => rate(cfg),
        Command::Chern => chern(cfg),
        Command::Skyrmion => skyrmion(cfg),
        Command::Sweep => sweep(cfg),
    }
}

/// Attaches both models to gap-closing errors.
fn named<T>(r: dqpt_core::Result<T>, initial: &ModelParams, post: &ModelParams) -> Result<T> {
    r.map_err(|e| {
        if e.is_degenerate() {
            CliError::Degenerate {
                source: e,
                initial: initial.to_string(),
                post: post.to_string(),
            }
        } else {
            CliError::Core(e)
        }
    })
}

fn trajectory(cfg: &RunConfig) -> Result<Outputs> {
    let (initial, post) = (cfg.initial(), cfg.post());
    let spec = named(cfg.spec(initial, post, cfg.n_modes), initial, post)?;
    let paths = named(trajectories(&spec), initial, post)?;
    let width = (cfg.n_modes.max(2) - 1).to_string().len();
    let mut out = Outputs::default();
    for (j, path) in paths.iter().enumerate() {
        out.write_with(format!("trajectories/mode_{j:0width$}.csv"), |w| {
            write_trajectories_csv(w, std::slice::from_ref(path))
        })?;
    }
    if cfg.emulate {
        let run = emulate(&spec, &cfg.emulation())?;
        out.write_with("trajectories/estimated.csv", |w| run.write_records_csv(w))?;
    }
    Ok(out)
}

fn rate(cfg: &RunConfig) -> Result<Outputs> {
    let initial = cfg.initial();
    let mut out = Outputs::default();
    for (label, post) in cfg.final_models() {
        let spec = named(cfg.spec(initial, &post, cfg.n_modes), initial, &post)?;
        let finite = named(rate_curve(&spec), initial, &post)?;
        let thermo = named(
            thermo_curve(initial, &post, &spec.times, cfg.quad_tol),
            initial,
            &post,
        )?;
        out.write_with(format!("rate_{label}.csv"), |w| {
            write_rate_curves_csv(w, &[finite, thermo])
        })?;

        if cfg.finite_size {
            let curves = cfg
                .finite_size_modes
                .par_iter()
                .map(|&n| rate_curve(&cfg.spec(initial, &post, n)?))
                .collect::<dqpt_core::Result<Vec<_>>>();
            let curves = named(curves, initial, &post)?;
            out.write_with(format!("finite_size_{label}.csv"), |w| {
                write_rate_curves_csv(w, &curves)
            })?;
        }

        if cfg.emulate {
            let run = emulate(&spec, &cfg.emulation())?;
            let measured = run.rate_curve(&spec)?;
            let bars = run.error_bars(&spec)?;
            out.write_with(format!("rate_emulated_{label}.csv"), |w| {
                writeln!(w, "t,f,df")?;
                for ((t, f), df) in measured.times.iter().zip(&measured.values).zip(&bars) {
                    writeln!(w, "{},{},{}", fmt_f64(*t), fmt_f64(*f), fmt_f64(*df))?;
                }
                Ok(())
            })?;
        }
    }
    Ok(out)
}

#[derive(serde::Serialize)]
struct ChernReport {
    fixed_point: i32,
    integral: f64,
    nk: usize,
    nt: usize,
}

fn chern(cfg: &RunConfig) -> Result<Outputs> {
    let (initial, post) = (cfg.initial(), cfg.post());
    let spec = named(cfg.spec(initial, post, cfg.n_modes), initial, post)?;
    let report = ChernReport {
        fixed_point: named(chern_fixed_points_models(initial, post), initial, post)?,
        integral: named(
            chern_integral(&spec, cfg.chern_nk, cfg.chern_nt),
            initial,
            post,
        )?,
        nk: cfg.chern_nk,
        nt: cfg.chern_nt,
    };
    let mut out = Outputs::default();
    out.write_with("chern.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    Ok(out)
}

fn write_centers<W: Write>(mut w: W, centers: &[SkyrmionCenter]) -> dqpt_core::Result<()> {
    writeln!(w, "k,t,s")?;
    for c in centers {
        writeln!(w, "{},{},{}", fmt_f64(c.k), fmt_f64(c.t), fmt_f64(c.s))?;
    }
    Ok(())
}

fn skyrmion(cfg: &RunConfig) -> Result<Outputs> {
    let initial = cfg.initial();
    let mut out = Outputs::default();
    for (label, post) in cfg.final_models() {
        let spec = named(cfg.spec(initial, &post, cfg.n_modes), initial, &post)?;
        let texture = named(skyrmion_texture(&spec), initial, &post)?;
        let centers = named(
            skyrmion_centers(&spec, &texture, CENTER_LEVEL),
            initial,
            &post,
        )?;
        out.write_with(format!("texture_{label}.csv"), |w| texture.write_csv(w))?;
        out.write_with(format!("minima_{label}.csv"), |w| {
            write_centers(w, &centers)
        })?;
    }
    Ok(out)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn sweep(cfg: &RunConfig) -> Result<Outputs> {
    let cells: Vec<(f64, f64)> = cfg
        .sweep
        .g_i
        .values()
        .into_iter()
        .flat_map(|g_i| {
            cfg.sweep
                .g_f
                .values()
                .into_iter()
                .map(move |g_f| (g_i, g_f))
        })
        .collect();
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(g_i, g_f)| {
            let set = critical_set(g_i, g_f, 0);
            let dqpt = set.k_star.is_some();
            // cells on the gap-closing line |g| = 1 have no Chern number
            let chern = chern_fixed_points(g_i, g_f)
                .ok()
                .map(|c| c.to_string())
                .unwrap_or_default();
            format!(
                "{},{},{},{},{},{}",
                fmt_f64(g_i),
                fmt_f64(g_f),
                dqpt,
                opt(set.k_star),
                opt(set.t_c.first().copied()),
                chern
            )
        })
        .collect();
    let mut out = Outputs::default();
    let mut text = String::from("g_i,g_f,dqpt,k_star,t_c0,chern\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    out.add("sweep.csv", text.into_bytes());
    Ok(out)
}

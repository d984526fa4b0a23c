//! Run configuration: JSON file, command-line overrides and per-command defaults.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

use dqpt_core::dynamics::ModeQuench;
use dqpt_core::emulation::{DeviceParams, EmulationConfig, ShotConfig};
use dqpt_core::observables::critical_momentum;
use dqpt_core::{ModelParams, MomentumGrid, QuenchSpec, TimeGrid};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Per-mode Bloch trajectories.
    Trajectory,
    /// Rate-function curves for a list of final fields.
    Rate,
    /// Dynamical Chern number by both methods.
    Chern,
    /// Skyrmion texture and its minima.
    Skyrmion,
    /// Phase-diagram scan over (g_i, g_f).
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Trajectory => "trajectory",
            Command::Rate => "rate",
            Command::Chern => "chern",
            Command::Skyrmion => "skyrmion",
            Command::Sweep => "sweep",
        }
    }
}

/// Flags that override the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON config file; flags take precedence over its fields.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Initial transverse field (switches the initial model to Ising).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gi: Option<f64>,
    /// Final transverse field(s), comma separated (switches the final model to Ising).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub gf: Option<Vec<f64>>,
    /// Number of momenta.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Time points per period.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Number of reference periods to simulate.
    #[arg(long, global = true)]
    pub periods: Option<usize>,
    /// Add emulated finite-shot measurements.
    #[arg(long, global = true)]
    pub emulate: bool,
    /// Turn T1/T2* damping off in emulation.
    #[arg(long, global = true)]
    pub no_decoherence: bool,
    /// Shots per tomography axis.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    /// Master seed for shot sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Never changes the output.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Also emit rate curves for several momentum counts.
    #[arg(long, global = true)]
    pub finite_size: bool,
}

/// Evenly spaced values `start..=stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Span {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        // scale before dividing so that round values such as ±1 land exactly
        let width = self.stop - self.start;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + width * i as f64 / last)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub g_i: Span,
    pub g_f: Span,
}

impl Default for SweepGrid {
    fn default() -> Self {
        let span = Span {
            start: -2.0,
            stop: 2.0,
            count: 41,
        };
        SweepGrid {
            g_i: span,
            g_f: span,
        }
    }
}

pub const RATE_FINAL_FIELDS: [f64; 6] = [3.5, 2.5, 1.5, 0.9, 0.8, 0.7];
pub const SKYRMION_FINAL_FIELDS: [f64; 2] = [1.5, 0.5];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub initial: Option<ModelParams>,
    #[serde(rename = "final")]
    pub post: Option<ModelParams>,
    /// Ising final fields for `rate` and `skyrmion`; takes precedence over `final`.
    pub g_f_list: Option<Vec<f64>>,
    pub n_modes: usize,
    /// Time points per period.
    pub n_steps: usize,
    pub periods: usize,
    pub emulate: bool,
    pub decoherence: bool,
    pub shots: ShotConfig,
    pub device: DeviceParams,
    pub n_triples: Option<usize>,
    pub finite_size: bool,
    pub finite_size_modes: Vec<usize>,
    /// Absolute tolerance of thermodynamic-limit rate values.
    pub quad_tol: f64,
    pub chern_nk: usize,
    pub chern_nt: usize,
    pub sweep: SweepGrid,
    #[serde(skip_serializing)]
    pub out: PathBuf,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            initial: None,
            post: None,
            g_f_list: None,
            n_modes: 30,
            n_steps: 70,
            periods: 2,
            emulate: false,
            decoherence: true,
            shots: ShotConfig::default(),
            device: DeviceParams::default(),
            n_triples: None,
            finite_size: false,
            finite_size_modes: vec![8, 16, 30, 64, 128, 256, 512, 1024],
            quad_tol: 1e-9,
            chern_nk: 200,
            chern_nt: 200,
            sweep: SweepGrid::default(),
            out: PathBuf::from("out"),
            workers: None,
        }
    }
}

fn ising(g: f64) -> ModelParams {
    ModelParams::Ising { g }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }

    /// Config file (if any), then flags, then command defaults, then validation.
    pub fn load(command: Command, flags: &Overrides) -> Result<Self> {
        let mut cfg = match &flags.config {
            Some(path) => Self::from_json_file(path)?,
            None => Self::default(),
        };
        cfg.apply(flags);
        cfg.resolve(command);
        cfg.validate(command)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, flags: &Overrides) {
        if let Some(g) = flags.gi {
            self.initial = Some(ising(g));
        }
        if let Some(list) = &flags.gf {
            self.post = list.first().map(|&g| ising(g));
            self.g_f_list = Some(list.clone());
        }
        if let Some(n) = flags.modes {
            self.n_modes = n;
        }
        if let Some(n) = flags.steps {
            self.n_steps = n;
        }
        if let Some(n) = flags.periods {
            self.periods = n;
        }
        self.emulate |= flags.emulate;
        if flags.no_decoherence {
            self.decoherence = false;
        }
        if let Some(n) = flags.shots {
            self.shots.n_shots = n;
        }
        if let Some(s) = flags.seed {
            self.shots.seed = s;
        }
        if flags.workers.is_some() {
            self.workers = flags.workers;
        }
        if let Some(out) = &flags.out {
            self.out = out.clone();
        }
        self.finite_size |= flags.finite_size;
    }

    /// Fills model choices left open with the command's defaults.
    pub fn resolve(&mut self, command: Command) {
        let default_initial = if command == Command::Skyrmion {
            0.0
        } else {
            0.2
        };
        self.initial.get_or_insert(ising(default_initial));
        match command {
            Command::Trajectory | Command::Chern => {
                if let Some(list) = self.g_f_list.take() {
                    if list.len() == 1 {
                        self.post = Some(ising(list[0]));
                    } else {
                        // keep it for validation to reject
                        self.g_f_list = Some(list);
                    }
                }
                self.post.get_or_insert(ising(1.5));
            }
            Command::Rate | Command::Skyrmion => {
                if self.post.is_none() && self.g_f_list.is_none() {
                    let defaults: &[f64] = if command == Command::Rate {
                        &RATE_FINAL_FIELDS
                    } else {
                        &SKYRMION_FINAL_FIELDS
                    };
                    self.g_f_list = Some(defaults.to_vec());
                }
                if self.g_f_list.is_some() {
                    self.post = None;
                }
            }
            Command::Sweep => {}
        }
    }

    pub fn validate(&self, command: Command) -> Result<()> {
        let positive = |field: &str, v: usize| {
            if v == 0 {
                Err(CliError::config(field, "must be at least 1"))
            } else {
                Ok(())
            }
        };
        positive("n_modes", self.n_modes)?;
        positive("n_steps", self.n_steps)?;
        positive("periods", self.periods)?;
        if let Some(w) = self.workers {
            positive("workers", w)?;
        }
        if let Some(list) = &self.g_f_list {
            if list.is_empty() {
                return Err(CliError::config("g_f_list", "must not be empty"));
            }
            if let Some(g) = list.iter().find(|g| !g.is_finite()) {
                return Err(CliError::config("g_f_list", format!("{g} is not finite")));
            }
            if matches!(command, Command::Trajectory | Command::Chern) && list.len() != 1 {
                return Err(CliError::config(
                    "gf",
                    format!("{} takes a single final field", command.name()),
                ));
            }
        }
        if command != Command::Sweep {
            let initial = self.initial.as_ref().expect("resolved");
            check_model("initial", initial)?;
            for (label, post) in self.final_models() {
                check_model("final", &post)?;
                if !initial.compatible_with(&post) {
                    return Err(CliError::config(
                        "final",
                        format!(
                            "{label} ({}) is not compatible with the initial {} model",
                            post.family(),
                            initial.family()
                        ),
                    ));
                }
            }
        }
        if self.emulate {
            self.shots
                .validate()
                .map_err(|e| CliError::config("shots", e.to_string()))?;
            if self.decoherence {
                self.device
                    .validate()
                    .map_err(|e| CliError::config("device", e.to_string()))?;
            }
            if self.n_steps * self.periods < 9 {
                return Err(CliError::config(
                    "n_steps",
                    "emulation needs at least 9 time points per mode",
                ));
            }
            if let Some(n) = self.n_triples {
                if n < 3 || n > self.n_steps * self.periods / 3 {
                    return Err(CliError::config(
                        "n_triples",
                        format!("{n} triples do not fit the time grid"),
                    ));
                }
            }
        }
        if self.finite_size_modes.is_empty() || self.finite_size_modes.contains(&0) {
            return Err(CliError::config(
                "finite_size_modes",
                "needs positive mode counts",
            ));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol.is_finite()) {
            return Err(CliError::config("quad_tol", "must be positive"));
        }
        if self.chern_nk < 16 || self.chern_nt < 16 {
            return Err(CliError::config(
                "chern_nk",
                "chern_nk and chern_nt must be at least 16",
            ));
        }
        for (field, span) in [("sweep.g_i", self.sweep.g_i), ("sweep.g_f", self.sweep.g_f)] {
            if span.count == 0 || !span.start.is_finite() || !span.stop.is_finite() {
                return Err(CliError::config(
                    field,
                    "needs finite bounds and count >= 1",
                ));
            }
        }
        Ok(())
    }

    pub fn initial(&self) -> &ModelParams {
        self.initial.as_ref().expect("config not resolved")
    }

    /// Final models with a file label each: `gf<g>` for list entries, `final` otherwise.
    pub fn final_models(&self) -> Vec<(String, ModelParams)> {
        match (&self.g_f_list, &self.post) {
            (Some(list), _) => list.iter().map(|&g| (format!("gf{g}"), ising(g))).collect(),
            (None, Some(post)) => vec![("final".to_string(), post.clone())],
            (None, None) => Vec::new(),
        }
    }

    pub fn post(&self) -> &ModelParams {
        self.post.as_ref().expect("config not resolved")
    }

    /// `period/n_steps` spaced grid with `n_steps·periods` points, starting at 0.
    pub fn time_grid(
        &self,
        initial: &ModelParams,
        post: &ModelParams,
    ) -> dqpt_core::Result<TimeGrid> {
        let period = reference_period(initial, post)?;
        TimeGrid::new(
            0.0,
            period / self.n_steps as f64,
            self.n_steps * self.periods,
        )
    }

    pub fn spec(
        &self,
        initial: &ModelParams,
        post: &ModelParams,
        n_modes: usize,
    ) -> dqpt_core::Result<QuenchSpec> {
        QuenchSpec::new(
            initial.clone(),
            post.clone(),
            MomentumGrid::new(n_modes)?,
            self.time_grid(initial, post)?,
        )
    }

    pub fn emulation(&self) -> EmulationConfig {
        EmulationConfig {
            shots: self.shots,
            device: self.decoherence.then_some(self.device),
            n_triples: self.n_triples,
        }
    }
}

fn check_model(field: &str, m: &ModelParams) -> Result<()> {
    let finite = match m {
        ModelParams::Ising { g } => g.is_finite(),
        ModelParams::Ssh { t, dt } => t.is_finite() && dt.is_finite(),
        ModelParams::Kitaev { t, delta, mu } => {
            t.is_finite() && delta.is_finite() && mu.is_finite()
        }
        ModelParams::Custom { .. } => true,
    };
    if finite {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("non-finite parameter in {m}"),
        ))
    }
}

const SCAN: usize = 4096;

/// Precession period `π/|d_f(k*)|` at the critical momentum, or at `k = π/2`
/// when the quench has none.
pub fn reference_period(initial: &ModelParams, post: &ModelParams) -> dqpt_core::Result<f64> {
    let k_star = match (initial, post) {
        (ModelParams::Ising { g: g_i }, ModelParams::Ising { g: g_f }) => {
            critical_momentum(*g_i, *g_f)
        }
        _ => scan_critical_momentum(initial, post)?,
    };
    let k = k_star.unwrap_or(FRAC_PI_2);
    Ok(ModeQuench::from_models(initial, post, k)?.period())
}

/// First zero of `b_i·d̂_f` on `[0, π]`, bracketed on a fine scan and bisected.
fn scan_critical_momentum(
    initial: &ModelParams,
    post: &ModelParams,
) -> dqpt_core::Result<Option<f64>> {
    let align = |k: f64| ModeQuench::from_models(initial, post, k).map(|m| m.alignment());
    let mut prev_k = 0.0;
    let mut prev = align(prev_k)?;
    for j in 1..=SCAN {
        let k = PI * j as f64 / SCAN as f64;
        let a = align(k)?;
        if prev == 0.0 {
            return Ok(Some(prev_k));
        }
        if prev.signum() != a.signum() {
            let (mut lo, mut hi, mut f_lo) = (prev_k, k, prev);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let f_mid = align(mid)?;
                if f_mid == 0.0 {
                    return Ok(Some(mid));
                }
                if f_mid.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev_k = k;
        prev = a;
    }
    Ok(None)
}

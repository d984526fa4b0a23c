//! Statistical stand-in for running the quench protocol on a transmon qubit.
//!
//! Exact mode trajectories are damped by T1/T2* decoherence, sampled with a
//! finite number of projective shots per axis and renormalized to pure states.
//! Error bars follow from how much the circle fitted through a measured
//! trajectory wobbles.

mod device;
mod errorbar;
mod pipeline;
mod tomography;

pub use device::{apply_decoherence, josephson_energy, transmon_level, DeviceParams};
pub use errorbar::{default_triples, error_bar_rate, measured_rate, path_fluctuation};
pub use pipeline::{emulate, Emulation, EmulationConfig, LabFrame};
pub use tomography::{sample_tomography, Estimate, ShotConfig, TomographyRecord};

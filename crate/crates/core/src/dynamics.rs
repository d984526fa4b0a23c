//! Exact quench dynamics of a single momentum mode.
//!
//! After the quench the state `ρ(t) = U ρ_i U†`, `U = exp(-i t d_f·σ)`, is the
//! initial Bloch vector precessing about `d̂_f` by the angle `2|d_f|t`
//! (right-hand rule), with period `π/|d_f|`. The production path is the closed-form
//! rotation; [`unitary_oracle`] recomputes the same thing from an explicit
//! eigendecomposition and exists to cross-check it.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{ground_bloch, normalize, rotate, BlochState, QuenchSpec, TimeGrid, Vec3};
use crate::models::ModelParams;
use crate::numeric::fmt_f64;
use crate::{Error, Result};

/// One momentum mode of a quench: the initial state and the post-quench field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeQuench {
    k: f64,
    initial: BlochState,
    post: Vec3,
    axis: BlochState,
    gap: f64,
}

impl ModeQuench {
    /// `initial` is the state Bloch vector, `post` the post-quench `d_f(k)`.
    pub fn new(k: f64, initial: BlochState, post: Vec3) -> Result<Self> {
        let axis = normalize(post).map_err(|_| Error::DegenerateMode {
            k,
            role: "post-quench",
        })?;
        Ok(ModeQuench {
            k,
            initial,
            post,
            axis,
            gap: post.norm(),
        })
    }

    /// Ground state of `pre` quenched by `post`, both evaluated at `k`.
    pub fn from_models(pre: &ModelParams, post: &ModelParams, k: f64) -> Result<Self> {
        let initial = ground_bloch(pre.d_vector(k)).map_err(|_| Error::DegenerateMode {
            k,
            role: "pre-quench",
        })?;
        Self::new(k, initial, post.d_vector(k))
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Initial state Bloch vector `b_i = -d̂_i`.
    pub fn initial(&self) -> BlochState {
        self.initial
    }

    pub fn post_field(&self) -> Vec3 {
        self.post
    }

    /// Rotation axis `d̂_f`.
    pub fn axis(&self) -> BlochState {
        self.axis
    }

    /// `|d_f|`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Precession period `π/|d_f|`.
    pub fn period(&self) -> f64 {
        PI / self.gap
    }

    /// `d̂_i·d̂_f` in the Hamiltonian convention, i.e. `(-b_i)·d̂_f`.
    pub fn alignment(&self) -> f64 {
        -self.initial.dot(self.axis)
    }

    /// Applies a rigid rotation `frame` to both the state and the field.
    pub fn transformed(&self, frame: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        let initial = normalize(frame(self.initial.vector()))?;
        Self::new(self.k, initial, frame(self.post))
    }
}

/// Builds every mode of the spec's momentum grid, in grid order.
pub fn modes(spec: &QuenchSpec) -> Result<Vec<ModeQuench>> {
    spec.momenta
        .points()
        .into_iter()
        .map(|k| ModeQuench::from_models(&spec.pre_quench, &spec.post_quench, k))
        .collect()
}

/// Bloch vector at time `t`.
pub fn evolve(mq: &ModeQuench, t: f64) -> BlochState {
    rotate(mq.initial, mq.axis, 2.0 * mq.gap * t)
}

/// A sampled path on the Bloch sphere.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub k: f64,
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
}

pub fn trajectory(mq: &ModeQuench, times: &TimeGrid) -> Trajectory {
    let times = times.times();
    let states = times.iter().map(|&t| evolve(mq, t)).collect();
    Trajectory {
        k: mq.k,
        times,
        states,
    }
}

/// Trajectories of every grid mode, computed in parallel and returned in grid order.
pub fn trajectories(spec: &QuenchSpec) -> Result<Vec<Trajectory>> {
    let modes = modes(spec)?;
    Ok(modes
        .par_iter()
        .map(|m| trajectory(m, &spec.times))
        .collect())
}

/// Writes trajectories as CSV with columns `k,t,bx,by,bz`.
pub fn write_trajectories_csv<W: Write>(mut w: W, paths: &[Trajectory]) -> Result<()> {
    writeln!(w, "k,t,bx,by,bz")?;
    for p in paths {
        for (t, b) in p.times.iter().zip(&p.states) {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_f64(p.k),
                fmt_f64(*t),
                fmt_f64(b.x()),
                fmt_f64(b.y()),
                fmt_f64(b.z())
            )?;
        }
    }
    Ok(())
}

/// Per-mode Loschmidt amplitude `cos(|d_f|t) + i (d̂_i·d̂_f) sin(|d_f|t)`.
pub fn loschmidt_mode(mq: &ModeQuench, t: f64) -> Complex64 {
    let (s, c) = (mq.gap * t).sin_cos();
    Complex64::new(c, mq.alignment() * s)
}

/// `|G_k(t)|²`, computed without forming the complex amplitude.
pub fn return_probability(mq: &ModeQuench, t: f64) -> f64 {
    let (s, c) = (mq.gap * t).sin_cos();
    let a = mq.alignment();
    c * c + a * a * s * s
}

fn pauli_dot(v: Vec3) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(v.z, 0.0),
        Complex64::new(v.x, -v.y),
        Complex64::new(v.x, v.y),
        Complex64::new(-v.z, 0.0),
    )
}

/// `exp(-i t d·σ)` from the eigendecomposition of the Hermitian matrix `d·σ`.
fn propagator(d: Vec3, t: f64) -> Matrix2<Complex64> {
    let eig = pauli_dot(d).symmetric_eigen();
    let v = eig.eigenvectors;
    let phases =
        Matrix2::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, -t * l).exp()));
    v * phases * v.adjoint()
}

/// Spinor with Bloch vector `b`.
fn spinor(b: BlochState) -> nalgebra::Vector2<Complex64> {
    let theta = b.z().clamp(-1.0, 1.0).acos();
    let phi = b.y().atan2(b.x());
    nalgebra::Vector2::new(
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    )
}

/// Evolved Bloch vector from `U ρ U†` with an explicit 2×2 propagator.
pub fn unitary_oracle(d_f: Vec3, t: f64, b_i: BlochState) -> BlochState {
    let u = propagator(d_f, t);
    let half = Complex64::new(0.5, 0.0);
    let rho = (Matrix2::identity() + pauli_dot(b_i.vector())) * half;
    let rho_t = u * rho * u.adjoint();
    let b = Vec3::new(
        2.0 * rho_t[(1, 0)].re,
        2.0 * rho_t[(1, 0)].im,
        (rho_t[(0, 0)] - rho_t[(1, 1)]).re,
    );
    normalize(b).unwrap_or(b_i)
}

/// `⟨φ_i| exp(-i t d_f·σ) |φ_i⟩` via the same explicit propagator.
pub fn unitary_overlap(d_f: Vec3, t: f64, b_i: BlochState) -> Complex64 {
    let phi = spinor(b_i);
    (phi.adjoint() * propagator(d_f, t) * phi)[(0, 0)]
}

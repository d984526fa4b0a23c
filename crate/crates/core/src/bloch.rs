//! Geometric primitives: 3-vectors, unit Bloch vectors, rotations, and the
//! momentum/time grids that describe one quench experiment.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::models::ModelParams;
use crate::{Error, Result};

/// Real 3-vector. Holds both Hamiltonian coefficients d(k) and Bloch components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm, computed with `hypot` to avoid overflow.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A unit vector on the Bloch sphere (pure state).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BlochState(Vec3);

impl BlochState {
    pub const PLUS_X: BlochState = BlochState(Vec3::X);
    pub const PLUS_Z: BlochState = BlochState(Vec3::Z);

    /// Unit vector in the direction of `v`.
    pub fn new(v: Vec3) -> Result<Self> {
        normalize(v)
    }

    pub fn vector(self) -> Vec3 {
        self.0
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }

    pub fn z(self) -> f64 {
        self.0.z
    }

    pub fn dot(self, o: BlochState) -> f64 {
        self.0.dot(o.0)
    }

    /// Antipodal state.
    pub fn flip(self) -> BlochState {
        BlochState(-self.0)
    }
}

impl From<BlochState> for Vec3 {
    fn from(b: BlochState) -> Vec3 {
        b.0
    }
}

/// `v / |v|`. A zero (or non-finite) input signals a gap closing.
pub fn normalize(v: Vec3) -> Result<BlochState> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateDVector);
    }
    Ok(BlochState(v * (1.0 / n)))
}

/// Rotates `b` about `axis` by `angle` using the right-hand rule (Rodrigues).
///
/// With this convention, conjugation `U (b·σ) U†` by `U = exp(-iθ/2 n̂·σ)`
/// is `rotate(b, n̂, θ)`; the unitary oracle in [`crate::dynamics`] checks it.
pub fn rotate(b: BlochState, axis: BlochState, angle: f64) -> BlochState {
    BlochState(rotate_vector(b.0, axis, angle))
}

/// [`rotate`] for vectors of any length (mixed states, noisy estimates).
pub fn rotate_vector(v: Vec3, axis: BlochState, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    let n = axis.0;
    v * c + n.cross(v) * s + n * (n.dot(v) * (1.0 - c))
}

/// Bloch vector of the lower band of `d·σ`, i.e. `-d̂`.
pub fn ground_bloch(d: Vec3) -> Result<BlochState> {
    normalize(d).map(BlochState::flip)
}

/// Radius of the circle through three points in 3D.
///
/// Uses `R = |a||b||a-b| / (2|a×b|)` with `a = p1-p3`, `b = p2-p3`.
pub fn circumradius(p1: Vec3, p2: Vec3, p3: Vec3) -> Result<f64> {
    let a = p1 - p3;
    let b = p2 - p3;
    let c = a - b;
    let area2 = a.cross(b).norm();
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    // Relative collinearity test: sin of the angle at p3.
    if la == 0.0 || lb == 0.0 || lc == 0.0 || area2 <= 1e-12 * la * lb {
        return Err(Error::DegenerateTriple);
    }
    Ok(la * lb * lc / (2.0 * area2))
}

/// `n_modes` equally spaced momenta `k_j = offset + 2πj/n`, all in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentumGrid {
    n_modes: usize,
    offset: f64,
}

impl MomentumGrid {
    /// Grid starting at k = 0.
    pub fn new(n_modes: usize) -> Result<Self> {
        Self::with_offset(n_modes, 0.0)
    }

    /// The offset must lie in `[0, 2π/n)` so every point stays inside `[0, 2π)`.
    pub fn with_offset(n_modes: usize, offset: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("momentum grid needs at least one mode"));
        }
        let spacing = TAU / n_modes as f64;
        if !(0.0..spacing).contains(&offset) {
            return Err(Error::invalid(format!(
                "momentum grid offset {offset} outside [0, {spacing})"
            )));
        }
        Ok(MomentumGrid { n_modes, offset })
    }

    /// Grid of `n_modes` points that contains `k` exactly (up to rounding).
    pub fn containing(n_modes: usize, k: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("momentum grid needs at least one mode"));
        }
        let spacing = TAU / n_modes as f64;
        let offset = k.rem_euclid(spacing);
        // rem_euclid can round up to `spacing` itself
        let offset = if offset >= spacing { 0.0 } else { offset };
        Self::with_offset(n_modes, offset)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n_modes as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.offset + TAU * j as f64 / self.n_modes as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_modes).map(|j| self.point(j)).collect()
    }
}

/// Uniform sampling `t_i = t_start + i·dt`, `i = 0..n_steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if !(t_start >= 0.0) || !t_start.is_finite() {
            return Err(Error::invalid(format!(
                "t_start must be finite and >= 0, got {t_start}"
            )));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!(
                "dt must be finite and > 0, got {dt}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        Ok(TimeGrid {
            t_start,
            dt,
            n_steps,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + self.dt * i as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_steps).map(|i| self.time(i)).collect()
    }
}

/// Pre- and post-quench models plus the sampling grids of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuenchSpec {
    pub pre_quench: ModelParams,
    pub post_quench: ModelParams,
    pub momenta: MomentumGrid,
    pub times: TimeGrid,
}

impl QuenchSpec {
    pub fn new(
        pre_quench: ModelParams,
        post_quench: ModelParams,
        momenta: MomentumGrid,
        times: TimeGrid,
    ) -> Result<Self> {
        if !pre_quench.compatible_with(&post_quench) {
            return Err(Error::invalid(format!(
                "pre-quench ({}) and post-quench ({}) models are not the same family",
                pre_quench.family(),
                post_quench.family()
            )));
        }
        Ok(QuenchSpec {
            pre_quench,
            post_quench,
            momenta,
            times,
        })
    }

    /// Transverse-field Ising quench `g_i → g_f`.
    pub fn ising(g_i: f64, g_f: f64, momenta: MomentumGrid, times: TimeGrid) -> Result<Self> {
        Self::new(
            ModelParams::Ising { g: g_i },
            ModelParams::Ising { g: g_f },
            momenta,
            times,
        )
    }
}

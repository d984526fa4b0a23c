//! Two-band models `h(k) = d0(k) + d(k)·σ` in the canonical frame, band
//! energies, and the fixed permutation into the laboratory frame.
//!
//! Closed forms (periodic boundary conditions):
//!
//! | model  | d(k)                                             |
//! |--------|--------------------------------------------------|
//! | Ising  | `(0, sin k, g - cos k)`                          |
//! | SSH    | `((t+δt) + (t-δt) cos k, (t-δt) sin k, 0)`       |
//! | Kitaev | `(0, Δ sin k, -μ/2 - t cos k)`                   |

use std::f64::consts::TAU;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bloch::Vec3;
use crate::{Error, Result};

/// One node of a tabulated model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: f64,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub d0: f64,
}

/// Tabulated d(k), d0(k), linearly interpolated with periodic wrap-around.
///
/// Nodes are sorted, unique, and inside `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TableRow>", into = "Vec<TableRow>")]
pub struct CustomTable {
    rows: Vec<TableRow>,
}

impl CustomTable {
    pub fn new(rows: Vec<TableRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(0.0..TAU).contains(&r.k) {
                return Err(Error::InvalidTable(format!("k = {} outside [0, 2π)", r.k)));
            }
            if ![r.dx, r.dy, r.dz, r.d0].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidTable(format!(
                    "non-finite entry at k = {}",
                    r.k
                )));
            }
            if i > 0 && rows[i - 1].k >= r.k {
                return Err(Error::InvalidTable(format!(
                    "k values must be strictly increasing ({} then {})",
                    rows[i - 1].k,
                    r.k
                )));
            }
        }
        Ok(CustomTable { rows })
    }

    /// Reads CSV with header `k,dx,dy,dz,d0`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["k", "dx", "dy", "dz", "d0"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::InvalidTable(format!(
                "expected header {:?}, found {:?}",
                expected,
                headers.iter().collect::<Vec<_>>()
            )));
        }
        let rows = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<TableRow>, _>>()?;
        Self::new(rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    fn same_nodes(&self, other: &CustomTable) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a.k == b.k)
    }

    /// Linear interpolation of `(dx, dy, dz, d0)` at `k`.
    fn interpolate(&self, k: f64) -> [f64; 4] {
        let k = k.rem_euclid(TAU);
        let rows = &self.rows;
        let as_arr = |r: &TableRow| [r.dx, r.dy, r.dz, r.d0];
        if rows.len() == 1 {
            return as_arr(&rows[0]);
        }
        // index of the first node strictly greater than k
        let hi = rows.partition_point(|r| r.k <= k);
        if hi == 0 || hi == rows.len() {
            // wrap segment between the last node and the first node + 2π
            let (last, first) = (&rows[rows.len() - 1], &rows[0]);
            let kk = if hi == 0 { k + TAU } else { k };
            let w = (kk - last.k) / (first.k + TAU - last.k);
            return lerp(as_arr(last), as_arr(first), w);
        }
        let (lo, up) = (&rows[hi - 1], &rows[hi]);
        lerp(as_arr(lo), as_arr(up), (k - lo.k) / (up.k - lo.k))
    }
}

fn lerp(a: [f64; 4], b: [f64; 4], w: f64) -> [f64; 4] {
    std::array::from_fn(|i| a[i] + (b[i] - a[i]) * w)
}

impl TryFrom<Vec<TableRow>> for CustomTable {
    type Error = Error;
    fn try_from(rows: Vec<TableRow>) -> Result<Self> {
        CustomTable::new(rows)
    }
}

impl From<CustomTable> for Vec<TableRow> {
    fn from(t: CustomTable) -> Self {
        t.rows
    }
}

/// Model family and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelParams {
    /// Transverse-field Ising chain, field strength `g`.
    Ising {
        g: f64,
    },
    /// Su-Schrieffer-Heeger chain with hoppings `t ± dt`.
    Ssh {
        t: f64,
        dt: f64,
    },
    /// p-wave Kitaev chain.
    Kitaev {
        t: f64,
        delta: f64,
        mu: f64,
    },
    Custom {
        table: CustomTable,
    },
}

impl ModelParams {
    pub fn family(&self) -> &'static str {
        match self {
            ModelParams::Ising { .. } => "ising",
            ModelParams::Ssh { .. } => "ssh",
            ModelParams::Kitaev { .. } => "kitaev",
            ModelParams::Custom { .. } => "custom",
        }
    }

    /// Same family, and for tabulated models the same k nodes.
    pub fn compatible_with(&self, other: &ModelParams) -> bool {
        match (self, other) {
            (ModelParams::Custom { table: a }, ModelParams::Custom { table: b }) => a.same_nodes(b),
            _ => self.family() == other.family(),
        }
    }

    pub fn d_vector(&self, k: f64) -> Vec3 {
        match *self {
            ModelParams::Ising { g } => Vec3::new(0.0, k.sin(), g - k.cos()),
            ModelParams::Ssh { t, dt } => {
                Vec3::new((t + dt) + (t - dt) * k.cos(), (t - dt) * k.sin(), 0.0)
            }
            ModelParams::Kitaev { t, delta, mu } => {
                Vec3::new(0.0, delta * k.sin(), -mu / 2.0 - t * k.cos())
            }
            ModelParams::Custom { ref table } => {
                let [x, y, z, _] = table.interpolate(k);
                Vec3::new(x, y, z)
            }
        }
    }

    /// Identity coefficient `d0(k)`; zero for every named model.
    pub fn d0_scalar(&self, k: f64) -> f64 {
        match self {
            ModelParams::Custom { table } => table.interpolate(k)[3],
            _ => 0.0,
        }
    }

    pub fn band_energies(&self, k: f64) -> BandPair {
        let d0 = self.d0_scalar(k);
        let gap = self.d_vector(k).norm();
        BandPair {
            eps_minus: d0 - gap,
            eps_plus: d0 + gap,
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParams::Ising { g } => write!(f, "ising(g={g})"),
            ModelParams::Ssh { t, dt } => write!(f, "ssh(t={t}, dt={dt})"),
            ModelParams::Kitaev { t, delta, mu } => {
                write!(f, "kitaev(t={t}, delta={delta}, mu={mu})")
            }
            ModelParams::Custom { table } => write!(f, "custom({} nodes)", table.rows().len()),
        }
    }
}

/// Lower and upper band energies at one momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandPair {
    pub eps_minus: f64,
    pub eps_plus: f64,
}

/// Canonical `(d_x, d_y, d_z)` to laboratory `(d_y, d_z, d_x)`.
///
/// The Ising field `(0, sin k, g - cos k)` becomes `sin k σx + (g - cos k) σy`,
/// putting every rotation axis in the lab XY plane.
pub fn to_experimental_frame(d: Vec3) -> Vec3 {
    Vec3::new(d.y, d.z, d.x)
}

/// Inverse of [`to_experimental_frame`].
pub fn from_experimental_frame(d: Vec3) -> Vec3 {
    Vec3::new(d.z, d.x, d.y)
}

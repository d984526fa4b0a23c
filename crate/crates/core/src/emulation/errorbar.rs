//! Error bars of the measured rate function from the spread of trajectory radii.

use crate::bloch::{circumradius, QuenchSpec, Vec3};
use crate::dynamics::modes;
use crate::emulation::TomographyRecord;
use crate::numeric::pairwise_sum;
use crate::observables::rate_from_overlaps;
use crate::{Error, Result};

/// Default number of triples for a path of `len` points: `floor(len/3)`.
pub fn default_triples(len: usize) -> usize {
    len / 3
}

/// Sample standard deviation of circumradii over triples `(i, i+m, i+2m)`,
/// `m = floor(len/3)`, for `i = 0..n_triples`.
///
/// Collinear triples are skipped; fewer than three usable radii is an error.
pub fn path_fluctuation(points: &[Vec3], n_triples: Option<usize>) -> Result<f64> {
    if points.len() < 9 {
        return Err(Error::invalid(format!(
            "path needs at least 9 points, got {}",
            points.len()
        )));
    }
    let m = points.len() / 3;
    let n = n_triples.unwrap_or(m);
    if n > m {
        return Err(Error::invalid(format!(
            "at most {m} disjoint triples fit in {} points",
            points.len()
        )));
    }
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        match circumradius(points[i], points[i + m], points[i + 2 * m]) {
            Ok(r) => radii.push(r),
            Err(Error::DegenerateTriple) => continue,
            Err(e) => return Err(e),
        }
    }
    if radii.len() < 3 {
        return Err(Error::TooFewRadii(radii.len()));
    }
    let mean = pairwise_sum(&radii) / radii.len() as f64;
    let sq: Vec<f64> = radii.iter().map(|r| (r - mean).powi(2)).collect();
    Ok((pairwise_sum(&sq) / (radii.len() - 1) as f64).sqrt())
}

/// Per-mode `(b_i·b_pure, fluctuation)` at `t_index`, in grid order.
fn mode_terms(
    spec: &QuenchSpec,
    records: &[TomographyRecord],
    t_index: usize,
) -> Result<Vec<(f64, f64)>> {
    let modes = modes(spec)?;
    let mut found: Vec<Option<&TomographyRecord>> = vec![None; modes.len()];
    for r in records.iter().filter(|r| r.t_index == t_index) {
        if let Some(j) = modes.iter().position(|m| (m.k() - r.k).abs() <= 1e-12) {
            found[j] = Some(r);
        }
    }
    let missing: Vec<f64> = modes
        .iter()
        .zip(&found)
        .filter(|(_, r)| r.is_none())
        .map(|(m, _)| m.k())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingModes(missing));
    }
    modes
        .iter()
        .zip(found)
        .map(|(m, r)| {
            let r = r.expect("checked above");
            let b = r.b_pure.ok_or_else(|| {
                Error::invalid(format!(
                    "record at k = {}, t_index = {t_index} has a zero estimate",
                    r.k
                ))
            })?;
            Ok((m.initial().dot(b), r.fluctuation))
        })
        .collect()
}

/// `Δf = (1/N) Σ_k ‖Δb(k)‖ / (1 + b_i(k)·b(k,t))` from the records at `t_index`.
///
/// A non-positive denominator (a measured Loschmidt zero) gives `+inf`.
pub fn error_bar_rate(
    spec: &QuenchSpec,
    records: &[TomographyRecord],
    t_index: usize,
) -> Result<f64> {
    let terms = mode_terms(spec, records, t_index)?;
    let mut parts = Vec::with_capacity(terms.len());
    for (overlap, fl) in &terms {
        let den = 1.0 + overlap;
        if den <= 0.0 {
            return Ok(f64::INFINITY);
        }
        parts.push(fl / den);
    }
    Ok(pairwise_sum(&parts) / terms.len() as f64)
}

/// Rate function `-(1/N) Σ_k ln[(1 + b_i·b)/2]` of the measured states at `t_index`.
pub fn measured_rate(
    spec: &QuenchSpec,
    records: &[TomographyRecord],
    t_index: usize,
) -> Result<f64> {
    let overlaps: Vec<f64> = mode_terms(spec, records, t_index)?
        .into_iter()
        .map(|(o, _)| o)
        .collect();
    Ok(rate_from_overlaps(&overlaps))
}

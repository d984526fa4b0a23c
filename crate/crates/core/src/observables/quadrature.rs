//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the tolerance. This copes with the integrable log
//! singularities that appear in the rate function at critical times.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::numeric::pairwise_sum;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Default cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 20_000;

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; ties broken by position for determinism
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let vals = if x == 0.0 {
            let v = f(center)?;
            [v, 0.0]
        } else {
            [f(center - half * x)?, f(center + half * x)?]
        };
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        let pair = vals[0] + vals[1];
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Integrates `f` over `[a, b]`, starting from `initial_pieces` equal subintervals.
///
/// Returns `(value, error_estimate)`; fails when the estimate cannot be pushed
/// below `abs_tol` within `max_intervals` subintervals.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    initial_pieces: usize,
    max_intervals: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(abs_tol > 0.0) {
        return Err(Error::invalid(format!(
            "quadrature tolerance must be > 0, got {abs_tol}"
        )));
    }
    let pieces = initial_pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(pieces * 4);
    for i in 0..pieces {
        let lo = a + (b - a) * i as f64 / pieces as f64;
        let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
        heap.push(gk15(&mut f, lo, hi)?);
    }
    loop {
        let total_err: f64 = heap.iter().map(|s| s.error).sum();
        if total_err <= abs_tol {
            break;
        }
        if heap.len() >= max_intervals {
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: abs_tol,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: abs_tol,
            });
        }
        heap.push(gk15(&mut f, worst.a, mid)?);
        heap.push(gk15(&mut f, mid, worst.b)?);
    }
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = segs.iter().map(|s| s.value).collect();
    let errors: Vec<f64> = segs.iter().map(|s| s.error).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&errors)))
}

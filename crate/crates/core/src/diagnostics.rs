//! Numerical diagnostics for unique ergodicity: systole scans along the
//! Teichmüller geodesic, the Boshernitzan series of an IET, Birkhoff
//! frequencies, saddle-connection directions and a Monte Carlo estimate of
//! the measure of directions with a short isolated connection.
//!
//! # Boshernitzan direction
//!
//! The remark is sometimes quoted as "if T is not uniquely ergodic then
//! n·m_n → ∞". The criterion as proved runs the other way: `limsup n·m_n > 0`
//! implies unique ergodicity, so an exchange that is not uniquely ergodic
//! has `n·m_n → 0`. [`boshernitzan_series`] reports the series and
//! classifies it with the same rules as every other scan, so both readings
//! can be checked against the data; nothing here decides between them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::flow::{FlowCursor, FlowError, FlowPoint, Iet};
use crate::saddle::{enumerate_saddle_connections, intersects, systole_along, teichmuller_matrix, SaddleError};
use crate::scalar::TOL;
use crate::Surface;

/// Floor below which a scan value counts as small.
pub const VERDICT_FLOOR: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Saddle(#[from] SaddleError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

impl DiagnosticsError {
    pub fn code(&self) -> &'static str {
        match self {
            DiagnosticsError::InvalidParameter(_) => "InvalidParameter",
            DiagnosticsError::Saddle(e) => e.code(),
            DiagnosticsError::Flow(e) => e.code(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "bound")]
pub enum Verdict {
    BoundedBelow(f64),
    DecaysToZero,
    DivergesToInfinity,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::BoundedBelow(_) => "BoundedBelow",
            Verdict::DecaysToZero => "DecaysToZero",
            Verdict::DivergesToInfinity => "DivergesToInfinity",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    /// Agreement between a systole-type verdict and a cusp-height verdict:
    /// decay of the systole is escape to the cusp.
    pub fn agrees_with(&self, other: &Verdict) -> bool {
        use Verdict::*;
        matches!(
            (self, other),
            (BoundedBelow(_), BoundedBelow(_))
                | (DecaysToZero | DivergesToInfinity, DecaysToZero | DivergesToInfinity)
                | (Inconclusive, Inconclusive)
        )
    }
}

/// Classifies a series: `DecaysToZero` if its last quarter is below `floor`
/// and non-increasing (within τ), `BoundedBelow(min)` if its last half stays
/// at or above `floor`, `Inconclusive` otherwise.
pub fn classify(values: &[f64], floor: f64) -> Verdict {
    let n = values.len();
    if n == 0 {
        return Verdict::Inconclusive;
    }
    let quarter = &values[n - n.div_ceil(4)..];
    if quarter.iter().all(|&v| v < floor) && quarter.windows(2).all(|w| w[1] <= w[0] + TOL) {
        return Verdict::DecaysToZero;
    }
    let min = values[n - n.div_ceil(2)..].iter().copied().fold(f64::INFINITY, f64::min);
    if min >= floor {
        Verdict::BoundedBelow(min)
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSeries {
    /// Name of the swept parameter (`t` or `n`).
    pub param: String,
    pub params: Vec<f64>,
    pub values: Vec<f64>,
    pub verdict: Verdict,
}

impl ScanSeries {
    /// `param,value` CSV with header, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,value\n");
        for (p, v) in self.params.iter().zip(&self.values) {
            out.push_str(&format!("{p:?},{v:?}\n"));
        }
        out
    }

    /// JSON summary: parameter name, grid size, extremes and verdict.
    pub fn summary(&self) -> serde_json::Value {
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bound = match self.verdict {
            Verdict::BoundedBelow(c) => Some(c),
            _ => None,
        };
        serde_json::json!({
            "param": self.param,
            "count": self.values.len(),
            "min": min,
            "max": max,
            "verdict": self.verdict.name(),
            "bound": bound,
        })
    }
}

fn check_grid(grid: &[f64]) -> Result<(), DiagnosticsError> {
    if grid.is_empty() || grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DiagnosticsError::InvalidParameter("grid must be non-empty, increasing and non-negative".into()));
    }
    Ok(())
}

/// `values[i] = systole_along(surface, theta, t_grid[i])`, computed in
/// parallel. A diagnostic consistent with Masur's criterion, not a proof.
pub fn masur_scan(surface: &Surface, theta: f64, t_grid: &[f64]) -> Result<ScanSeries, DiagnosticsError> {
    check_grid(t_grid)?;
    let values = t_grid.par_iter().map(|&t| systole_along(surface, theta, t)).collect::<Result<Vec<_>, _>>()?;
    let verdict = classify(&values, VERDICT_FLOOR);
    Ok(ScanSeries { param: "t".into(), params: t_grid.to_vec(), values, verdict })
}

/// `values[n-1] = n · m_n` for `n = 1..=n_max`, with floor `0.05 · total`.
pub fn boshernitzan_series(iet: &Iet, n_max: usize) -> Result<ScanSeries, DiagnosticsError> {
    if n_max == 0 {
        return Err(DiagnosticsError::InvalidParameter("n_max must be at least 1".into()));
    }
    let values: Vec<f64> = iet.min_gap_series(n_max).into_iter().enumerate().map(|(i, m)| (i + 1) as f64 * m).collect();
    let verdict = classify(&values, VERDICT_FLOOR * iet.total());
    let params = (1..=n_max).map(|n| n as f64).collect();
    Ok(ScanSeries { param: "n".into(), params, values, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffReport {
    pub samples: usize,
    /// Fraction of samples in each triangle.
    pub frequencies: Vec<f64>,
    /// Area of each triangle over the total area.
    pub area_fractions: Vec<f64>,
    pub discrepancies: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Samples the orbit of `start` at times `kΔ`, `k < n`, and compares the
/// time spent in each triangle with its share of the area.
pub fn birkhoff_discrepancy(
    surface: &Surface,
    theta: f64,
    start: FlowPoint,
    n: usize,
    delta: f64,
) -> Result<BirkhoffReport, DiagnosticsError> {
    if n == 0 || !(delta > 0.0 && delta.is_finite()) {
        return Err(DiagnosticsError::InvalidParameter("need N ≥ 1 and Δ > 0".into()));
    }
    let mut cursor = FlowCursor::new(surface, start, theta)?;
    let mut counts = vec![0usize; surface.num_triangles()];
    counts[start.triangle] += 1;
    for _ in 1..n {
        counts[cursor.advance(delta)?.triangle] += 1;
    }
    let area = surface.area();
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let area_fractions: Vec<f64> = surface.triangles().iter().map(|t| t.signed_area() / area).collect();
    let discrepancies: Vec<f64> = frequencies.iter().zip(&area_fractions).map(|(f, a)| (f - a).abs()).collect();
    let max_discrepancy = discrepancies.iter().copied().fold(0.0, f64::max);
    Ok(BirkhoffReport { samples: n, frequencies, area_fractions, discrepancies, max_discrepancy })
}

/// Distinct directions in `[0, 2π)` of saddle connections of length at
/// most `max_len`, sorted.
pub fn saddle_directions(surface: &Surface, max_len: f64) -> Result<Vec<f64>, DiagnosticsError> {
    let mut dirs: Vec<f64> = enumerate_saddle_connections(surface, max_len)?.iter().map(|c| c.direction()).collect();
    dirs.sort_by(f64::total_cmp);
    dirs.dedup_by(|b, a| *b - *a <= 1e-9);
    if dirs.len() > 1 && dirs[0] + std::f64::consts::TAU - dirs[dirs.len() - 1] <= 1e-9 {
        dirs.pop();
    }
    Ok(dirs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub fraction: f64,
    pub stderr: f64,
    pub samples: usize,
    /// `fraction / ε`.
    pub ratio: f64,
}

/// Monte Carlo estimate of the measure of directions `θ` for which
/// `g_t R_θ S` has a saddle connection of length at most `ε` crossing no
/// other connection of length at most `c`. Directions are drawn uniformly
/// from `[0, 2π)` by a ChaCha8 generator seeded with `seed`; the result does
/// not depend on the thread count.
pub fn measure_estimate(
    surface: &Surface,
    t: f64,
    eps: f64,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<MeasureEstimate, DiagnosticsError> {
    if !(eps > 0.0 && eps < c && c.is_finite() && t >= 0.0 && t.is_finite() && samples > 0) {
        return Err(DiagnosticsError::InvalidParameter(format!(
            "need 0 < ε < c, t ≥ 0 and M ≥ 1 (ε={eps}, c={c}, t={t}, M={samples})"
        )));
    }
    // |g_t w| ≥ e^{-t}|w|, so nothing longer than e^t·c can matter
    let conns = enumerate_saddle_connections(surface, t.exp() * c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<f64> = (0..samples).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
    let hits = thetas
        .par_iter()
        .filter(|&&theta| {
            let m = teichmuller_matrix(std::f64::consts::FRAC_PI_2 - theta, t);
            let near: Vec<_> = conns.iter().filter(|a| m.apply(a.holonomy).norm() <= c).collect();
            near.iter().any(|a| {
                m.apply(a.holonomy).norm() <= eps
                    && near.iter().all(|b| b.same_segment(a, surface) || !intersects(a, b, surface))
            })
        })
        .count();
    let p = hits as f64 / samples as f64;
    Ok(MeasureEstimate { fraction: p, stderr: (p * (1.0 - p) / samples as f64).sqrt(), samples, ratio: p / eps })
}

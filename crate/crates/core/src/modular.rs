//! Flat tori as points of the modular surface: Gauss reduction of a
//! lattice basis and cusp excursions along the Teichmüller geodesic.

use serde::Serialize;
use thiserror::Error;

use crate::diagnostics::{ScanSeries, Verdict, VERDICT_FLOOR};
use crate::geom::{Mat2, Vec2};
use crate::scalar::Real;

/// Cusp height above which a point counts as escaped.
pub const ESCAPE_HEIGHT: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModularError {
    #[error("basis vectors do not span a positively oriented lattice")]
    DegenerateBasis,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl ModularError {
    pub fn code(&self) -> &'static str {
        match self {
            ModularError::DegenerateBasis => "DegenerateBasis",
            ModularError::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

/// Basis moves generating `SL(2,Z)`. On `z = e2/e1`: `T` is `z + 1`,
/// `Tinv` is `z - 1`, `S` is `-1/z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Letter {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "T^-1")]
    Tinv,
    #[serde(rename = "S")]
    S,
}

impl Letter {
    pub fn apply<T: Real>(self, (e1, e2): (Vec2<T>, Vec2<T>)) -> (Vec2<T>, Vec2<T>) {
        match self {
            Letter::T => (e1, e2 + e1),
            Letter::Tinv => (e1, e2 - e1),
            Letter::S => (e2, -e1),
        }
    }

    pub fn apply_inverse<T: Real>(self, (e1, e2): (Vec2<T>, Vec2<T>)) -> (Vec2<T>, Vec2<T>) {
        match self {
            Letter::T => (e1, e2 - e1),
            Letter::Tinv => (e1, e2 + e1),
            Letter::S => (-e2, e1),
        }
    }
}

/// A point `z = re + i·im` of the upper half-plane with the word that
/// brought the basis there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularPoint<T> {
    pub re: T,
    pub im: T,
    pub word: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct ReducedBasis<T> {
    pub e1: Vec2<T>,
    pub e2: Vec2<T>,
    pub point: ModularPoint<T>,
}

/// `z = e2 / e1` as complex numbers.
pub fn ratio<T: Real>(e1: Vec2<T>, e2: Vec2<T>) -> (T, T) {
    let n = e1.norm_sq();
    (e1.dot(e2) / n, e1.cross(e2) / n)
}

/// Gauss reduction: a basis of the same lattice whose ratio lies in the
/// closed fundamental domain `|Re z| ≤ 1/2`, `|z| ≥ 1` (up to τ).
pub fn lattice_reduce<T: Real>(e1: Vec2<T>, e2: Vec2<T>) -> Result<ReducedBasis<T>, ModularError> {
    let det = e1.cross(e2);
    if !(det.is_finite() && det > T::tol() * e1.norm() * e2.norm()) {
        return Err(ModularError::DegenerateBasis);
    }
    let half = T::lit(0.5);
    let mut basis = (e1, e2);
    let mut word = Vec::new();
    loop {
        let (re, _) = ratio(basis.0, basis.1);
        if re.abs() > half + T::tol() {
            let n = re.round();
            let letter = if n > T::zero() { Letter::Tinv } else { Letter::T };
            let count = n.abs().to_usize().ok_or(ModularError::DegenerateBasis)?;
            for _ in 0..count {
                basis = letter.apply(basis);
            }
            word.extend(std::iter::repeat_n(letter, count));
        }
        let (re, im) = ratio(basis.0, basis.1);
        if re * re + im * im < T::one() - T::tol() {
            basis = Letter::S.apply(basis);
            word.push(Letter::S);
        } else {
            return Ok(ReducedBasis { e1: basis.0, e2: basis.1, point: ModularPoint { re, im, word } });
        }
    }
}

/// Undoes `word` on a reduced basis, recovering the original basis.
pub fn unreduce<T: Real>(e1: Vec2<T>, e2: Vec2<T>, word: &[Letter]) -> (Vec2<T>, Vec2<T>) {
    word.iter().rev().fold((e1, e2), |b, l| l.apply_inverse(b))
}

/// Cusp height `Im z` of the reduced point of `g_t · (e1, e2)` along
/// `t_grid`. Escape (`DivergesToInfinity`) when the last three heights
/// exceed [`ESCAPE_HEIGHT`] and do not decrease; `BoundedBelow(c)` when the
/// last half stays at or below it, with `c` the smallest systole
/// `Im(z)^{-1/2}` of a unit-covolume lattice there (at least
/// [`VERDICT_FLOOR`] by construction).
pub fn modular_excursion<T: Real>(e1: Vec2<T>, e2: Vec2<T>, t_grid: &[T]) -> Result<ScanSeries, ModularError> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(ModularError::InvalidParameter("grid must be non-empty and increasing".into()));
    }
    let values = t_grid
        .iter()
        .map(|&t| {
            let g = Mat2::geodesic(t);
            lattice_reduce(g.apply(e1), g.apply(e2)).map(|r| r.point.im.to_f64().unwrap_or(f64::NAN))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let params = t_grid.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    Ok(ScanSeries { param: "t".into(), params, verdict: excursion_verdict(&values), values })
}

fn excursion_verdict(values: &[f64]) -> Verdict {
    let n = values.len();
    let last3 = &values[n.saturating_sub(3)..];
    if n >= 3 && last3.iter().all(|&v| v > ESCAPE_HEIGHT) && last3.windows(2).all(|w| w[1] >= w[0] - 1e-9) {
        return Verdict::DivergesToInfinity;
    }
    let tail = &values[n - n.div_ceil(2)..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= ESCAPE_HEIGHT && max.powf(-0.5) >= VERDICT_FLOOR {
        Verdict::BoundedBelow(max.powf(-0.5))
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    type V = Vec2<f64>;

    #[test]
    fn square_is_fixed() {
        let r = lattice_reduce(V::new(1.0, 0.0), V::new(0.0, 1.0)).unwrap();
        assert!(r.point.word.is_empty());
        assert_eq!((r.point.re, r.point.im), (0.0, 1.0));
    }

    #[test]
    fn sheared_basis_round_trips() {
        let (e1, e2) = (V::new(1.0, 0.0), V::new(5.0, 1.0));
        let r = lattice_reduce(e1, e2).unwrap();
        assert!(r.point.re.abs() <= 0.5 + 1e-9);
        assert!(r.point.re.powi(2) + r.point.im.powi(2) >= 1.0 - 1e-9);
        let (a, b) = unreduce(r.e1, r.e2, &r.point.word);
        assert!(a.approx_eq(e1, 1e-9) && b.approx_eq(e2, 1e-9));
    }

    #[test]
    fn hexagonal_point() {
        let r = lattice_reduce(V::new(1.0, 0.0), V::new(0.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((r.point.re - FRAC_PI_3.cos()).abs() < 1e-12);
        assert!((r.point.im - FRAC_PI_3.sin()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_reversed_bases() {
        assert_eq!(lattice_reduce(V::new(1.0, 0.0), V::new(2.0, 0.0)), Err(ModularError::DegenerateBasis));
        assert_eq!(lattice_reduce(V::new(0.0, 1.0), V::new(1.0, 0.0)), Err(ModularError::DegenerateBasis));
    }

    #[test]
    fn vertical_escape_and_golden_boundedness() {
        let grid: Vec<f64> = (0..=12).map(|i| i as f64 * 0.5).collect();
        let s = modular_excursion(V::new(1.0, 0.0), V::new(0.0, 1.0), &grid).unwrap();
        assert_eq!(s.values[0], 1.0);
        for (t, v) in grid.iter().zip(&s.values).filter(|(t, _)| **t >= 1.0) {
            assert!((v - (2.0 * t).exp()).abs() < 1e-9 * v);
        }
        assert_eq!(s.verdict, Verdict::DivergesToInfinity);

        // golden slope made vertical: rotate the square lattice by π/2 - atan φ
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let rot = Mat2::rotation(std::f64::consts::FRAC_PI_2 - phi.atan());
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let s = modular_excursion(rot.apply(V::new(1.0, 0.0)), rot.apply(V::new(0.0, 1.0)), &grid).unwrap();
        assert!(s.values.iter().all(|&v| v < 2.0));
        assert!(matches!(s.verdict, Verdict::BoundedBelow(_)));
    }

    #[test]
    fn single_precision_reduction() {
        let r = lattice_reduce(Vec2::<f32>::new(1.0, 0.0), Vec2::new(3.0, 1.0)).unwrap();
        assert!(r.point.re.abs() <= 0.5 + f32::tol());
    }
}

//! Interval exchange transformations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum IetError {
    #[error("point {x} outside [0, {total})")]
    OutOfDomain { x: f64, total: f64 },
    #[error("interval lengths must be positive and finite")]
    BadLengths,
    #[error("permutation is not a bijection of 1..={0}")]
    BadPermutation(usize),
}

impl IetError {
    pub fn code(&self) -> &'static str {
        match self {
            IetError::OutOfDomain { .. } => "OutOfDomain",
            IetError::BadLengths => "BadLengths",
            IetError::BadPermutation(_) => "BadPermutation",
        }
    }
}

/// JSON form: `{"lengths": [...], "permutation": [...]}` with a 1-based
/// permutation, `permutation[i]` being the position of interval `i` after
/// the exchange.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct IetData {
    lengths: Vec<f64>,
    permutation: Vec<usize>,
}

/// An interval exchange on `[0, total)`. Interval `i` (in left-to-right
/// order) is translated to position `permutation[i]` (0-based) of the image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IetData", into = "IetData")]
pub struct Iet {
    lengths: Vec<f64>,
    permutation: Vec<usize>,
    starts: Vec<f64>,
    shifts: Vec<f64>,
}

impl TryFrom<IetData> for Iet {
    type Error = IetError;
    fn try_from(d: IetData) -> Result<Self, IetError> {
        let n = d.permutation.len();
        if d.permutation.iter().any(|&p| p == 0 || p > n) {
            return Err(IetError::BadPermutation(n));
        }
        Iet::new(d.lengths, d.permutation.iter().map(|p| p - 1).collect())
    }
}

impl From<Iet> for IetData {
    fn from(t: Iet) -> Self {
        IetData { permutation: t.permutation.iter().map(|p| p + 1).collect(), lengths: t.lengths }
    }
}

impl Iet {
    /// `permutation` is 0-based here.
    pub fn new(lengths: Vec<f64>, permutation: Vec<usize>) -> Result<Self, IetError> {
        let n = lengths.len();
        if n == 0 || lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(IetError::BadLengths);
        }
        let mut seen = vec![false; n];
        if permutation.len() != n {
            return Err(IetError::BadPermutation(n));
        }
        for &p in &permutation {
            if p >= n || seen[p] {
                return Err(IetError::BadPermutation(n));
            }
            seen[p] = true;
        }
        let mut starts = Vec::with_capacity(n);
        let mut acc = 0.0;
        for l in &lengths {
            starts.push(acc);
            acc += l;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| permutation[i]);
        let mut image_starts = vec![0.0; n];
        let mut acc = 0.0;
        for &i in &order {
            image_starts[i] = acc;
            acc += lengths[i];
        }
        let shifts = (0..n).map(|i| image_starts[i] - starts[i]).collect();
        Ok(Iet { lengths, permutation, starts, shifts })
    }

    /// Rotation `x ↦ x + alpha mod 1` as a two-interval exchange.
    pub fn rotation(alpha: f64) -> Result<Self, IetError> {
        Iet::new(vec![1.0 - alpha, alpha], vec![1, 0])
    }

    pub fn identity(total: f64) -> Result<Self, IetError> {
        Iet::new(vec![total], vec![0])
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// 0-based permutation.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Left endpoints of the intervals; the first is 0.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    /// Translation applied to each interval.
    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    fn interval_of(&self, x: f64) -> Result<usize, IetError> {
        let total = self.total();
        if !(0.0..total).contains(&x) {
            return Err(IetError::OutOfDomain { x, total });
        }
        Ok(self.starts.partition_point(|&s| s <= x) - 1)
    }

    pub fn apply(&self, x: f64) -> Result<f64, IetError> {
        let i = self.interval_of(x)?;
        Ok((x + self.shifts[i]).clamp(0.0, self.total()))
    }

    pub fn inverse(&self) -> Iet {
        let n = self.len();
        let mut inv = vec![0; n];
        for (i, &p) in self.permutation.iter().enumerate() {
            inv[p] = i;
        }
        // the image intervals, left to right, return to the positions `inv`
        let lengths = inv.iter().map(|&i| self.lengths[i]).collect();
        Iet::new(lengths, inv).expect("inverse of a valid exchange is valid")
    }

    /// Sorted interior breakpoints of the partition refined by `T, ..., T^n`:
    /// the points `T^{-k}(a)` for interior breakpoints `a` and `0 ≤ k < n`.
    pub fn power_partition(&self, n: usize) -> Vec<f64> {
        let mut pts = PartitionBuilder::new(self);
        for _ in 0..n {
            pts.step();
        }
        pts.points
    }

    /// `m_n`, the shortest cell of `power_partition(n)`.
    pub fn min_gap(&self, n: usize) -> f64 {
        self.min_gap_series(n).last().copied().unwrap_or_else(|| self.total())
    }

    /// `m_1, ..., m_n_max`, computed incrementally.
    pub fn min_gap_series(&self, n_max: usize) -> Vec<f64> {
        let mut pts = PartitionBuilder::new(self);
        (0..n_max).map(|_| pts.step()).collect()
    }
}

struct PartitionBuilder {
    inverse: Iet,
    total: f64,
    dedup: f64,
    /// current preimages `T^{-k}(a)`; `None` once an orbit is lost at the
    /// boundary
    front: Vec<Option<f64>>,
    points: Vec<f64>,
    gap: f64,
}

impl PartitionBuilder {
    fn new(t: &Iet) -> Self {
        let total = t.total();
        PartitionBuilder {
            inverse: t.inverse(),
            total,
            dedup: 1e-12 * total,
            front: t.starts[1..].iter().map(|&a| Some(a)).collect(),
            points: Vec::new(),
            gap: total,
        }
    }

    fn insert(&mut self, x: f64) {
        if x <= self.dedup || x >= self.total - self.dedup {
            return;
        }
        let i = self.points.partition_point(|&p| p < x);
        let left = if i == 0 { 0.0 } else { self.points[i - 1] };
        let right = self.points.get(i).copied().unwrap_or(self.total);
        if x - left <= self.dedup || right - x <= self.dedup {
            return;
        }
        self.points.insert(i, x);
        self.gap = self.gap.min(x - left).min(right - x);
    }

    /// Adds the next layer of preimages and returns the new minimal gap.
    fn step(&mut self) -> f64 {
        for j in 0..self.front.len() {
            if let Some(x) = self.front[j] {
                self.insert(x);
                self.front[j] = self.inverse.apply(x).ok();
            }
        }
        self.gap
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Iet {
        Iet::rotation((5f64.sqrt() - 1.0) / 2.0).unwrap()
    }

    #[test]
    fn apply_and_inverse() {
        let t = Iet::new(vec![0.2, 0.3, 0.5], vec![2, 0, 1]).unwrap();
        // image order: interval 1, interval 2, interval 0
        assert!((t.apply(0.25).unwrap() - 0.05).abs() < 1e-15);
        assert!((t.apply(0.1).unwrap() - 0.9).abs() < 1e-15);
        assert!((t.apply(0.6).unwrap() - 0.4).abs() < 1e-15);
        let inv = t.inverse();
        for &x in &[0.0, 0.1, 0.25, 0.49, 0.6, 0.99] {
            let y = t.apply(x).unwrap();
            assert!((inv.apply(y).unwrap() - x).abs() < 1e-15);
        }
        assert_eq!(t.apply(1.0), Err(IetError::OutOfDomain { x: 1.0, total: 1.0 }));
        assert!(t.apply(-0.1).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Iet::new(vec![1.0, 0.0], vec![0, 1]), Err(IetError::BadLengths));
        assert_eq!(Iet::new(vec![1.0, 1.0], vec![0, 0]), Err(IetError::BadPermutation(2)));
    }

    #[test]
    fn partition_examples() {
        let id = Iet::identity(1.0).unwrap();
        for n in 1..5 {
            assert!(id.power_partition(n).is_empty());
            assert_eq!(id.min_gap(n), 1.0);
        }
        let half = Iet::rotation(0.5).unwrap();
        assert_eq!(half.power_partition(2), vec![0.5]);
        assert_eq!(half.min_gap(1), 0.5);
        assert_eq!(golden().power_partition(10).len(), 10);
    }

    /// Independent oracle: orbit points `{-kα mod 1}` of the breakpoint
    /// computed directly and sorted.
    fn golden_gap_oracle(n: usize) -> f64 {
        let a = (5f64.sqrt() - 1.0) / 2.0;
        let mut pts: Vec<f64> = (0..n).map(|k| (1.0 - a - k as f64 * a).rem_euclid(1.0)).collect();
        pts.push(0.0);
        pts.push(1.0);
        pts.sort_by(f64::total_cmp);
        pts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn golden_min_gap_matches_oracle() {
        let t = golden();
        let series = t.min_gap_series(1000);
        for &n in &[1usize, 2, 10, 100, 1000] {
            assert!((series[n - 1] - golden_gap_oracle(n)).abs() < 1e-12, "n = {n}");
        }
        assert!((series[99] * 100.0 - 0.5025).abs() < 1e-4);
        for (i, m) in series.iter().enumerate() {
            let v = (i + 1) as f64 * m;
            assert!((0.2..=1.0).contains(&v));
        }
        assert!(series.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn json_is_one_based() {
        let t = Iet::rotation(0.5).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"lengths":[0.5,0.5],"permutation":[2,1]}"#);
        let back: Iet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Iet>(r#"{"lengths":[1.0],"permutation":[0]}"#).is_err());
    }
}

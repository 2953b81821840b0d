//! Saddle connections: enumeration by straight-line development, systoles,
//! systoles along the Teichmüller geodesic, direction intervals and
//! crossing tests.
//!
//! The search starts in every corner of every vertex and develops chains of
//! triangles into the plane, tracking the open cone of directions that is
//! still unobstructed. A vertex image strictly inside the cone is a saddle
//! connection; the cone is then split in two at that vertex. A branch is
//! pruned once every point of the cone beyond the current edge is longer
//! than the bound. Lengths are measured as `|m v|` for a fixed matrix `m`,
//! which covers both the flat length (`m = I`) and the length after the
//! deformation `g_t R_θ`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{ANGLE_TOL, TOL};
use crate::surface::Slot;
use crate::{Mat2, Surface, Vec2};

/// Default cap on expanded search nodes per call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

/// Overrides the node budget used by every search in this process.
pub fn set_default_budget(nodes: u64) {
    BUDGET.store(nodes.max(1), AtomicOrdering::Relaxed);
}

pub fn default_budget() -> u64 {
    BUDGET.load(AtomicOrdering::Relaxed)
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SaddleError {
    #[error("search budget of {budget} nodes exceeded; {found} connections found so far (partial)")]
    BudgetExceeded { budget: u64, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl SaddleError {
    pub fn code(&self) -> &'static str {
        match self {
            SaddleError::BudgetExceeded { .. } => "BudgetExceeded",
            SaddleError::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

/// Straight piece of a connection inside one triangle, in that triangle's
/// local frame (corner 0 at the origin).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathPiece {
    pub triangle: usize,
    pub entry: Vec2,
    pub exit: Vec2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleConnection {
    pub holonomy: Vec2,
    /// Vertex class ids.
    pub start: usize,
    pub end: usize,
    /// Corner the connection leaves from and the corner it arrives in.
    pub start_corner: Slot,
    pub end_corner: Slot,
    /// Angular position of the outgoing direction around the start vertex,
    /// in `[0, cone angle)`.
    pub start_angle: f64,
    /// Angular position of the reversed direction around the end vertex.
    pub end_angle: f64,
    pub path: Vec<PathPiece>,
}

impl SaddleConnection {
    pub fn length(&self) -> f64 {
        self.holonomy.norm()
    }

    pub fn direction(&self) -> f64 {
        self.holonomy.angle()
    }

    /// Same connection traversed backwards.
    pub fn reversed(&self) -> SaddleConnection {
        SaddleConnection {
            holonomy: -self.holonomy,
            start: self.end,
            end: self.start,
            start_corner: self.end_corner,
            end_corner: self.start_corner,
            start_angle: self.end_angle,
            end_angle: self.start_angle,
            path: self
                .path
                .iter()
                .rev()
                .map(|p| PathPiece { triangle: p.triangle, entry: p.exit, exit: p.entry })
                .collect(),
        }
    }

    /// Whether `other` is this connection with the same orientation.
    pub fn same_as(&self, other: &SaddleConnection, surface: &Surface) -> bool {
        self.start == other.start
            && self.holonomy.approx_eq(other.holonomy, TOL)
            && angle_close(self.start_angle, other.start_angle, surface.vertices()[self.start].cone_angle)
    }

    /// Whether `other` is this connection, in either orientation.
    pub fn same_segment(&self, other: &SaddleConnection, surface: &Surface) -> bool {
        self.same_as(other, surface) || self.same_as(&other.reversed(), surface)
    }

    pub fn to_record(&self) -> ConnectionRecord {
        ConnectionRecord {
            holonomy: [self.holonomy.x, self.holonomy.y],
            start: self.start,
            end: self.end,
            length: self.length(),
        }
    }
}

/// Serialized form of a saddle connection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionRecord {
    pub holonomy: [f64; 2],
    pub start: usize,
    pub end: usize,
    pub length: f64,
}

fn angle_close(a: f64, b: f64, period: f64) -> bool {
    let d = (a - b).rem_euclid(period);
    d < 1e-7 || period - d < 1e-7
}

fn cmp_connections(a: &SaddleConnection, b: &SaddleConnection) -> Ordering {
    a.length()
        .total_cmp(&b.length())
        .then(a.direction().total_cmp(&b.direction()))
        .then(a.start.cmp(&b.start))
        .then(a.end.cmp(&b.end))
        .then(a.start_angle.total_cmp(&b.start_angle))
}

struct Link {
    triangle: usize,
    /// Developed position of the triangle's corner 0.
    offset: Vec2,
    /// Edge crossed to enter this triangle (developed endpoints).
    entry: Option<(Vec2, Vec2)>,
}

struct Search<'a> {
    surface: &'a Surface,
    metric: Mat2,
    bound: f64,
    shrink: bool,
    budget: u64,
    counter: &'a AtomicU64,
    exhausted: bool,
    found: Vec<SaddleConnection>,
    chain: Vec<Link>,
    root: Slot,
}

#[inline]
fn crossing_param(p: Vec2, q: Vec2, dir: Vec2) -> f64 {
    let e = q - p;
    e.cross(p) / e.cross(dir)
}

impl<'a> Search<'a> {
    #[inline]
    fn norm(&self, v: Vec2) -> f64 {
        self.metric.apply(v).norm()
    }

    #[inline]
    fn within(&self, len: f64) -> bool {
        len <= self.bound * (1.0 + 1e-12)
    }

    fn segment_min_norm(&self, a: Vec2, b: Vec2) -> f64 {
        let y0 = self.metric.apply(a);
        let dy = self.metric.apply(b - a);
        let dd = dy.norm_sq();
        let s = if dd > 0.0 { (-y0.dot(dy) / dd).clamp(0.0, 1.0) } else { 0.0 };
        (y0 + dy * s).norm()
    }

    fn record(&mut self, hol: Vec2, end_corner: Slot, path: Vec<PathPiece>) {
        let s = self.surface;
        let (t, i) = self.root;
        let start_angle = s.corner_offset(self.root) + s.triangle(t).edge(i).angle_to(hol).max(0.0);
        let (et, ei) = end_corner;
        let end_angle = s.corner_offset(end_corner) + s.triangle(et).edge(ei).angle_to(-hol).max(0.0);
        let start = s.vertex_of(self.root);
        let end = s.vertex_of(end_corner);
        let wrap = |a: f64, v: usize| {
            let c = s.vertices()[v].cone_angle;
            let r = a.rem_euclid(c);
            if c - r < 1e-12 {
                0.0
            } else {
                r
            }
        };
        let len = self.norm(hol);
        if self.shrink && len < self.bound {
            self.bound = len;
        }
        self.found.push(SaddleConnection {
            holonomy: hol,
            start,
            end,
            start_corner: self.root,
            end_corner,
            start_angle: wrap(start_angle, start),
            end_angle: wrap(end_angle, end),
            path,
        });
    }

    fn path_to(&self, r: Vec2, last: usize) -> Vec<PathPiece> {
        let mut params = Vec::with_capacity(self.chain.len() + 1);
        params.push(0.0);
        for link in &self.chain[1..] {
            let (p, q) = link.entry.expect("non-root link has an entry edge");
            params.push(crossing_param(p, q, r).clamp(0.0, 1.0));
        }
        params.push(1.0);
        let mut pieces = Vec::with_capacity(self.chain.len());
        for (k, link) in self.chain.iter().enumerate() {
            pieces.push(PathPiece {
                triangle: link.triangle,
                entry: r * params[k] - link.offset,
                exit: r * params[k + 1] - link.offset,
            });
        }
        debug_assert_eq!(pieces.last().map(|p| p.triangle), Some(last));
        pieces
    }

    fn run_corner(&mut self, corner: Slot) {
        let s = self.surface;
        let (t, i) = corner;
        let tri = s.triangle(t);
        self.root = corner;
        self.chain.clear();
        let offset = -tri.corner(i);
        self.chain.push(Link { triangle: t, offset, entry: None });
        let e = tri.edge(i);
        if self.within(self.norm(e)) {
            let path = vec![PathPiece { triangle: t, entry: tri.corner(i), exit: tri.corner(i + 1) }];
            self.record(e, (t, (i + 1) % 3), path);
        }
        let p = e;
        let q = e + tri.edge(i + 1);
        self.explore(t, (i + 1) % 3, p, q, p, q);
    }

    fn explore(&mut self, t: usize, k: usize, p: Vec2, q: Vec2, a: Vec2, b: Vec2) {
        if self.exhausted {
            return;
        }
        if self.counter.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
            self.exhausted = true;
            return;
        }
        let xa = a * crossing_param(p, q, a);
        let xb = b * crossing_param(p, q, b);
        if !xa.is_finite() || !xb.is_finite() || !self.within(self.segment_min_norm(xa, xb)) {
            return;
        }
        let s = self.surface;
        let (nt, j) = s.partner((t, k));
        let ntri = s.triangle(nt);
        let offset = q - ntri.corner(j);
        let r = p + ntri.edge(j + 1);
        self.chain.push(Link { triangle: nt, offset, entry: Some((p, q)) });

        let la = a.cross(r) / a.norm();
        let lb = r.cross(b) / b.norm();
        if la > TOL && lb > TOL {
            let len = self.norm(r);
            if self.within(len) {
                let path = self.path_to(r, nt);
                self.record(r, (nt, (j + 2) % 3), path);
            }
            self.explore(nt, (j + 1) % 3, p, r, a, r);
            self.explore(nt, (j + 2) % 3, r, q, r, b);
        } else if la <= TOL {
            self.explore(nt, (j + 2) % 3, r, q, a, b);
        } else {
            self.explore(nt, (j + 1) % 3, p, r, a, b);
        }
        self.chain.pop();
    }
}

fn all_corners(surface: &Surface) -> Vec<Slot> {
    surface.vertices().iter().flat_map(|v| v.corners.iter().copied()).collect()
}

fn finish(mut found: Vec<SaddleConnection>) -> Vec<SaddleConnection> {
    found.sort_by(cmp_connections);
    found.dedup_by(|b, a| {
        a.start == b.start
            && a.end == b.end
            && a.holonomy.approx_eq(b.holonomy, TOL)
            && (a.start_angle - b.start_angle).abs() < ANGLE_TOL
    });
    found
}

/// Every oriented saddle connection `v` with `|m v| ≤ bound`, sorted by
/// flat length then direction. On budget exhaustion the partial list is
/// returned with `complete = false`.
pub fn enumerate_in_metric(surface: &Surface, metric: &Mat2, bound: f64, budget: u64) -> (Vec<SaddleConnection>, bool) {
    let counter = AtomicU64::new(0);
    let corners = all_corners(surface);
    let results: Vec<(Vec<SaddleConnection>, bool)> = corners
        .par_iter()
        .map(|&c| {
            let mut search = Search {
                surface,
                metric: *metric,
                bound,
                shrink: false,
                budget,
                counter: &counter,
                exhausted: false,
                found: Vec::new(),
                chain: Vec::new(),
                root: c,
            };
            search.run_corner(c);
            (search.found, search.exhausted)
        })
        .collect();
    let complete = results.iter().all(|r| !r.1);
    let found = results.into_iter().flat_map(|r| r.0).collect();
    (finish(found), complete)
}

/// Oriented saddle connections of flat length at most `max_len`.
pub fn enumerate_saddle_connections(surface: &Surface, max_len: f64) -> Result<Vec<SaddleConnection>, SaddleError> {
    if !(max_len > 0.0) || !max_len.is_finite() {
        return Err(SaddleError::InvalidParameter(format!("length bound {max_len} must be positive")));
    }
    let budget = default_budget();
    let (found, complete) = enumerate_in_metric(surface, &Mat2::identity(), max_len, budget);
    if !complete {
        return Err(SaddleError::BudgetExceeded { budget, found: found.len() });
    }
    Ok(found)
}

/// A saddle connection minimizing `|m v|`, and that minimum.
pub fn shortest_in_metric(surface: &Surface, metric: &Mat2) -> Result<(f64, SaddleConnection), SaddleError> {
    let budget = default_budget();
    let counter = AtomicU64::new(0);
    // any triangle edge is a saddle connection, so its length is a valid start
    let mut bound = f64::INFINITY;
    for t in surface.triangles() {
        for e in &t.edges {
            bound = bound.min(metric.apply(*e).norm());
        }
    }
    let mut search = Search {
        surface,
        metric: *metric,
        bound,
        shrink: true,
        budget,
        counter: &counter,
        exhausted: false,
        found: Vec::new(),
        chain: Vec::new(),
        root: (0, 0),
    };
    for c in all_corners(surface) {
        search.run_corner(c);
    }
    if search.exhausted {
        return Err(SaddleError::BudgetExceeded { budget, found: search.found.len() });
    }
    let m = *metric;
    search
        .found
        .into_iter()
        .map(|c| (m.apply(c.holonomy).norm(), c))
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| cmp_connections(&a.1, &b.1)))
        .ok_or(SaddleError::InvalidParameter("surface has no saddle connection".into()))
}

/// Length of the shortest saddle connection.
pub fn systole(surface: &Surface) -> Result<f64, SaddleError> {
    shortest_in_metric(surface, &Mat2::identity()).map(|r| r.0)
}

/// The deformation `g_t R_{π/2 - θ}`, which turns direction `θ` vertical and
/// then contracts the vertical.
pub fn teichmuller_matrix(theta: f64, t: f64) -> Mat2 {
    Mat2::geodesic(t) * Mat2::rotation(FRAC_PI_2 - theta)
}

/// Systole of `g_t R_{π/2 - θ} S`, computed on `S` in the deformed metric.
pub fn systole_along(surface: &Surface, theta: f64, t: f64) -> Result<f64, SaddleError> {
    if !theta.is_finite() || !t.is_finite() {
        return Err(SaddleError::InvalidParameter("theta and t must be finite".into()));
    }
    shortest_in_metric(surface, &teichmuller_matrix(theta, t)).map(|r| r.0)
}

/// Closed arc `[start, start + length]` on the circle of directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    /// In `[0, 2π)`.
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.length >= TAU || (theta - self.start).rem_euclid(TAU) <= self.length
    }
}

/// Union of disjoint arcs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DirectionArcs {
    pub arcs: Vec<Arc>,
}

impl DirectionArcs {
    pub fn full() -> Self {
        DirectionArcs { arcs: vec![Arc { start: 0.0, length: TAU }] }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length).sum()
    }

    /// Pieces in `[0, 2π)` with wrapping arcs split at 0.
    pub fn unwrapped(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for a in &self.arcs {
            if a.length >= TAU {
                out.push((0.0, TAU));
            } else if a.end() > TAU {
                out.push((a.start, TAU));
                out.push((0.0, a.end() - TAU));
            } else {
                out.push((a.start, a.end()));
            }
        }
        out
    }
}

/// Lebesgue measure of a union of arcs (overlaps counted once).
pub fn union_measure<'a>(sets: impl IntoIterator<Item = &'a DirectionArcs>) -> f64 {
    let mut pieces: Vec<(f64, f64)> = sets.into_iter().flat_map(|s| s.unwrapped()).collect();
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in pieces {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((a, b)) = cur {
        total += b - a;
    }
    total
}

/// The set of `θ` with `|g_t R_θ v| ≤ ε`: empty, the full circle, or two
/// antipodal arcs.
pub fn direction_interval(v: Vec2, t: f64, eps: f64) -> DirectionArcs {
    let r2 = v.norm_sq();
    if r2 == 0.0 || !(eps > 0.0) {
        return DirectionArcs::default();
    }
    if t < 0.0 {
        // g_t = R_{-π/2} g_{-t} R_{π/2} up to sign, so the set shifts by -π/2
        let mut out = direction_interval(v, -t, eps);
        for a in &mut out.arcs {
            if a.length < TAU {
                a.start = (a.start - FRAC_PI_2).rem_euclid(TAU);
            }
        }
        return out;
    }
    // with ψ = arg(v) + θ: |g_t R_θ v|² = r²(e^{-2t} + (e^{2t} - e^{-2t}) cos²ψ)
    let down = (-2.0 * t).exp();
    let spread = (2.0 * t).exp() - down;
    let rhs = eps * eps / r2 - down;
    if rhs < 0.0 {
        return DirectionArcs::default();
    }
    if rhs >= spread {
        return DirectionArcs::full();
    }
    let c = (rhs / spread).sqrt();
    let a = c.acos();
    let phi = v.y.atan2(v.x);
    let width = PI - 2.0 * a;
    DirectionArcs {
        arcs: vec![
            Arc { start: (a - phi).rem_euclid(TAU), length: width },
            Arc { start: (PI + a - phi).rem_euclid(TAU), length: width },
        ],
    }
}

fn segment_hit(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> Option<Result<Vec2, (f64, f64)>> {
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let denom = d1.cross(d2);
    let scale = d1.norm() * d2.norm();
    if scale == 0.0 {
        return None;
    }
    if denom.abs() <= 1e-12 * scale {
        // parallel: overlap only if collinear
        if (q1 - p1).cross(d1).abs() / d1.norm() > TOL {
            return None;
        }
        let l = d1.norm_sq();
        let s0 = (q1 - p1).dot(d1) / l;
        let s1 = (q2 - p1).dot(d1) / l;
        let (lo, hi) = (s0.min(s1).max(0.0), s0.max(s1).min(1.0));
        return if (hi - lo) * d1.norm() > TOL { Some(Err((lo, hi))) } else { None };
    }
    let s = (q1 - p1).cross(d2) / denom;
    let u = (q1 - p1).cross(d1) / denom;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&s) && (-eps..=1.0 + eps).contains(&u) {
        Some(Ok(p1 + d1 * s))
    } else {
        None
    }
}

/// Whether the open interiors of two saddle connections meet. A connection
/// does not intersect itself (in either orientation); distinct connections
/// sharing a segment do.
pub fn intersects(a: &SaddleConnection, b: &SaddleConnection, surface: &Surface) -> bool {
    if a.same_segment(b, surface) {
        return false;
    }
    for pa in &a.path {
        let tri = surface.triangle(pa.triangle);
        for pb in b.path.iter().filter(|p| p.triangle == pa.triangle) {
            match segment_hit(pa.entry, pa.exit, pb.entry, pb.exit) {
                Some(Ok(x)) => {
                    if (0..3).all(|i| (x - tri.corner(i)).norm() > 1e-8) {
                        return true;
                    }
                }
                Some(Err(_)) => return true,
                None => {}
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{slit_tori, square_torus, three_square};

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    fn primitive_vectors(l: f64) -> Vec<(i64, i64)> {
        let n = l.floor() as i64;
        let mut v = Vec::new();
        for p in -n..=n {
            for q in -n..=n {
                if (p, q) != (0, 0) && gcd(p, q) == 1 && ((p * p + q * q) as f64) <= l * l {
                    v.push((p, q));
                }
            }
        }
        v.sort();
        v
    }

    fn holonomies(c: &[SaddleConnection]) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = c.iter().map(|c| (c.holonomy.x.round() as i64, c.holonomy.y.round() as i64)).collect();
        v.sort();
        v
    }

    #[test]
    fn torus_small_lengths() {
        let s = square_torus();
        let c = enumerate_saddle_connections(&s, 1.5).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(holonomies(&c), primitive_vectors(1.5));
        assert!(enumerate_saddle_connections(&s, 0.5).unwrap().is_empty());
    }

    #[test]
    fn torus_matches_lattice_oracle() {
        let s = square_torus();
        for l in [2.0, 3.7, 7.0] {
            let c = enumerate_saddle_connections(&s, l).unwrap();
            assert_eq!(holonomies(&c), primitive_vectors(l), "L = {l}");
            for w in &c {
                let sum = w.path.iter().fold(Vec2::zero(), |acc, p| acc + (p.exit - p.entry));
                assert!(sum.approx_eq(w.holonomy, 1e-9));
            }
        }
    }

    #[test]
    fn orientation_pairing_on_three_square() {
        let s = three_square();
        let c = enumerate_saddle_connections(&s, 3.0).unwrap();
        assert!(!c.is_empty());
        for w in &c {
            let rev = w.reversed();
            assert!(c.iter().any(|x| x.same_as(&rev, &s)), "missing reverse of {:?}", w.holonomy);
        }
    }

    #[test]
    fn slit_is_a_connection() {
        let s = slit_tori(0.5).unwrap();
        let c = enumerate_saddle_connections(&s, 0.6).unwrap();
        let slit: Vec<_> = c.iter().filter(|w| w.holonomy.approx_eq(Vec2::new(0.0, 0.5), 1e-9)).collect();
        assert!(!slit.is_empty());
        assert!(slit.iter().all(|w| w.start != w.end));
        assert!((systole(&slit_tori(0.3).unwrap()).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn systole_examples() {
        let s = square_torus();
        assert!((systole(&s).unwrap() - 1.0).abs() < 1e-12);
        let r = s.apply_matrix(&Mat2::rotation(0.77)).unwrap();
        assert!((systole(&r).unwrap() - 1.0).abs() < 1e-9);
        let v = systole_along(&s, FRAC_PI_2, 2.0).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn direction_interval_edge_cases() {
        let v = Vec2::new(1.0, 0.0);
        assert_eq!(direction_interval(v, 1.0, 3.0), DirectionArcs::full());
        assert!(direction_interval(v, 1.0, 0.3).is_empty());
        assert_eq!(direction_interval(v, 0.0, 1.5), DirectionArcs::full());
        assert!(direction_interval(v, 0.0, 0.5).is_empty());
        let arcs = direction_interval(v, 3.0, 0.1);
        assert_eq!(arcs.arcs.len(), 2);
        let d = (arcs.arcs[1].start - arcs.arcs[0].start).rem_euclid(TAU);
        assert!((d - PI).abs() < 1e-12);
    }

    #[test]
    fn torus_intersections() {
        let s = square_torus();
        let c = enumerate_saddle_connections(&s, 1.5).unwrap();
        let find = |x: f64, y: f64| c.iter().find(|w| w.holonomy.approx_eq(Vec2::new(x, y), 1e-9)).unwrap();
        let (h, v) = (find(1.0, 0.0), find(0.0, 1.0));
        let (d1, d2) = (find(1.0, 1.0), find(1.0, -1.0));
        assert!(!intersects(h, h, &s));
        assert!(!intersects(h, &h.reversed(), &s));
        assert!(!intersects(h, v, &s));
        assert!(intersects(d1, d2, &s));
        assert!(intersects(d2, d1, &s));
        assert!(!intersects(d1, h, &s));
    }
}

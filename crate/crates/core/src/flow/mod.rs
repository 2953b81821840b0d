//! Straight-line flow in a fixed direction, traced triangle by triangle,
//! and first-return maps to transverse segments.

pub mod iet;

pub use iet::{Iet, IetError};

use serde::Serialize;
use thiserror::Error;

use crate::saddle::default_budget;
use crate::scalar::{ANGLE_TOL, TOL};
use crate::{Surface, Vec2};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FlowError {
    #[error("start point {point:?} of triangle {triangle} is on a vertex")]
    StartOnVertex { triangle: usize, point: [f64; 2] },
    #[error("start point {point:?} is not in triangle {triangle}")]
    StartOutside { triangle: usize, point: [f64; 2] },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("crossing budget {0} exceeded")]
    BudgetExceeded(u64),
    #[error("orbit hit a singularity at time {time}")]
    SingularityHit { time: f64 },
    #[error("no return within flow length {0}")]
    NoReturn(f64),
    #[error("section not transverse: {0}")]
    NotTransverse(String),
    #[error("return map is not a piecewise translation: {0}")]
    NotPiecewiseTranslation(String),
    #[error(transparent)]
    Iet(#[from] IetError),
}

impl FlowError {
    pub fn code(&self) -> &'static str {
        match self {
            FlowError::StartOnVertex { .. } => "StartOnVertex",
            FlowError::StartOutside { .. } => "StartOutside",
            FlowError::InvalidParameter(_) => "InvalidParameter",
            FlowError::BudgetExceeded(_) => "BudgetExceeded",
            FlowError::SingularityHit { .. } => "SingularityHit",
            FlowError::NoReturn(_) => "NoReturn",
            FlowError::NotTransverse(_) => "NotTransverse",
            FlowError::NotPiecewiseTranslation(_) => "NotPiecewiseTranslation",
            FlowError::Iet(e) => e.code(),
        }
    }
}

/// A point of the surface in the local frame of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowPoint {
    pub triangle: usize,
    pub position: Vec2,
}

impl FlowPoint {
    pub fn new(triangle: usize, position: Vec2) -> Self {
        FlowPoint { triangle, position }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub triangle: usize,
    pub entry: Vec2,
    pub exit: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Termination {
    TimeExpired,
    SingularityHit { time: f64 },
    Closed { period: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    pub total_length: f64,
    pub termination: Termination,
    /// Where the flow stopped.
    pub end: FlowPoint,
}

impl Trajectory {
    /// CSV rows `index,triangle,entry_x,entry_y,exit_x,exit_y` with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("segment,triangle,entry_x,entry_y,exit_x,exit_y\n");
        for (i, s) in self.segments.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{:?},{:?},{:?},{:?}\n",
                s.triangle, s.entry.x, s.entry.y, s.exit.x, s.exit.y
            ));
        }
        out
    }
}

enum Step {
    Inside(Vec2),
    Cross { s: f64, exit: Vec2, next: FlowPoint },
    Vertex { s: f64, exit: Vec2 },
}

/// Moves from `at` along unit vector `u` for at most `max`, stopping at the
/// first side or vertex met.
fn step(surface: &Surface, at: FlowPoint, u: Vec2, max: f64) -> Step {
    let tri = surface.triangle(at.triangle);
    let p = at.position;
    let mut best: Option<(f64, usize)> = None;
    for i in 0..3 {
        let e = tri.edge(i);
        let rate = e.cross(u);
        // sides the flow runs along or enters through are never exits
        if rate >= -1e-12 * e.norm() {
            continue;
        }
        let s = (e.cross(p - tri.corner(i)) / -rate).max(0.0);
        if best.is_none_or(|(b, _)| s < b) {
            best = Some((s, i));
        }
    }
    let (s, i) = best.expect("a bounded triangle has an exit side");
    if s > max {
        return Step::Inside(p + u * max);
    }
    let exit = p + u * s;
    if (exit - tri.corner(i)).norm() <= TOL || (exit - tri.corner(i + 1)).norm() <= TOL {
        return Step::Vertex { s, exit };
    }
    let (nt, j) = surface.partner((at.triangle, i));
    let next = exit - tri.corner(i) + surface.triangle(nt).corner(j + 1);
    Step::Cross { s, exit, next: FlowPoint::new(nt, next) }
}

fn check_start(surface: &Surface, start: FlowPoint) -> Result<(), FlowError> {
    let point = [start.position.x, start.position.y];
    if start.triangle >= surface.num_triangles() || !start.position.is_finite() {
        return Err(FlowError::StartOutside { triangle: start.triangle, point });
    }
    let tri = surface.triangle(start.triangle);
    if (0..3).any(|i| (start.position - tri.corner(i)).norm() <= TOL) {
        return Err(FlowError::StartOnVertex { triangle: start.triangle, point });
    }
    if !tri.contains_strict(start.position, -TOL) {
        return Err(FlowError::StartOutside { triangle: start.triangle, point });
    }
    Ok(())
}

fn check_direction(theta: f64) -> Result<Vec2, FlowError> {
    if !theta.is_finite() {
        return Err(FlowError::InvalidParameter(format!("direction {theta}")));
    }
    Ok(Vec2::from_angle(theta))
}

/// Distance along the segment at which it passes within 1e-9 of `p`.
fn passes_through(p: Vec2, a: Vec2, b: Vec2) -> Option<f64> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return ((p - a).norm() <= 1e-9).then_some(0.0);
    }
    let w = d * (1.0 / len);
    let along = (p - a).dot(w);
    let off = w.cross(p - a).abs();
    (off <= 1e-9 && along >= -1e-9 && along <= len + 1e-9).then_some(along.clamp(0.0, len))
}

/// Flows from `start` in direction `theta` for time `duration`.
pub fn trace(surface: &Surface, start: FlowPoint, theta: f64, duration: f64) -> Result<Trajectory, FlowError> {
    check_start(surface, start)?;
    let u = check_direction(theta)?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(FlowError::InvalidParameter(format!("flow time {duration}")));
    }
    let cap = default_budget();
    let mut segments = Vec::new();
    let mut at = start;
    let mut elapsed = 0.0;
    loop {
        if segments.len() as u64 > cap {
            return Err(FlowError::BudgetExceeded(cap));
        }
        let (exit, s, outcome) = match step(surface, at, u, duration - elapsed) {
            Step::Inside(q) => (q, duration - elapsed, None),
            Step::Cross { s, exit, next } => (exit, s, Some(Some(next))),
            Step::Vertex { s, exit } => (exit, s, Some(None)),
        };
        let seg = Segment { triangle: at.triangle, entry: at.position, exit };
        let closes = (!segments.is_empty() && at.triangle == start.triangle)
            .then(|| passes_through(start.position, seg.entry, seg.exit))
            .flatten();
        segments.push(seg);
        if let Some(along) = closes {
            let period = elapsed + along;
            segments.last_mut().unwrap().exit = start.position;
            return Ok(Trajectory {
                segments,
                total_length: period,
                termination: Termination::Closed { period },
                end: start,
            });
        }
        elapsed += s;
        match outcome {
            None => {
                let end = FlowPoint::new(at.triangle, exit);
                return Ok(Trajectory { segments, total_length: duration, termination: Termination::TimeExpired, end });
            }
            Some(None) => {
                let end = FlowPoint::new(at.triangle, exit);
                let termination = Termination::SingularityHit { time: elapsed };
                return Ok(Trajectory { segments, total_length: elapsed, termination, end });
            }
            Some(Some(next)) => at = next,
        }
    }
}

/// Incremental flow without segment bookkeeping, for long orbit sampling.
#[derive(Clone, Debug)]
pub struct FlowCursor<'a> {
    surface: &'a Surface,
    u: Vec2,
    at: FlowPoint,
    time: f64,
}

impl<'a> FlowCursor<'a> {
    pub fn new(surface: &'a Surface, start: FlowPoint, theta: f64) -> Result<Self, FlowError> {
        check_start(surface, start)?;
        Ok(FlowCursor { surface, u: check_direction(theta)?, at: start, time: 0.0 })
    }

    pub fn position(&self) -> FlowPoint {
        self.at
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Flows for `dt` more; fails if a vertex is reached first.
    pub fn advance(&mut self, dt: f64) -> Result<FlowPoint, FlowError> {
        let mut left = dt;
        loop {
            match step(self.surface, self.at, self.u, left) {
                Step::Inside(q) => {
                    self.at.position = q;
                    self.time += left;
                    return Ok(self.at);
                }
                Step::Cross { s, next, .. } => {
                    left -= s;
                    self.time += s;
                    self.at = next;
                }
                Step::Vertex { s, .. } => {
                    return Err(FlowError::SingularityHit { time: self.time + s });
                }
            }
        }
    }
}

/// A straight segment of the surface: it starts at `start` (local to
/// `triangle`, possibly a corner) and develops along `vector`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Section {
    pub triangle: usize,
    pub start: Vec2,
    pub vector: Vec2,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    triangle: usize,
    a: Vec2,
    b: Vec2,
    /// arc-length position of `a` on the section
    offset: f64,
}

struct DevelopedSection {
    length: f64,
    dir: Vec2,
    /// the section itself, in order
    pieces: Vec<Piece>,
    /// `pieces` plus copies of those lying on a side, seen from across it
    all: Vec<Piece>,
    start_vertex: bool,
    end_vertex: bool,
}

fn near_corner(surface: &Surface, p: FlowPoint) -> bool {
    let tri = surface.triangle(p.triangle);
    (0..3).any(|i| (p.position - tri.corner(i)).norm() <= TOL)
}

fn develop_section(surface: &Surface, sec: &Section) -> Result<DevelopedSection, FlowError> {
    let length = sec.vector.norm();
    if sec.triangle >= surface.num_triangles() || !(length > TOL) || !sec.start.is_finite() {
        return Err(FlowError::InvalidParameter("degenerate section".into()));
    }
    let dir = sec.vector * (1.0 / length);
    let mut at = FlowPoint::new(sec.triangle, sec.start);
    let start_vertex = near_corner(surface, at);
    if !start_vertex {
        check_start(surface, at)?;
    }
    let mut pieces = Vec::new();
    let mut offset = 0.0;
    let end_vertex;
    loop {
        if pieces.len() as u64 > default_budget() {
            return Err(FlowError::BudgetExceeded(default_budget()));
        }
        let left = length - offset;
        match step(surface, at, dir, left) {
            Step::Inside(q) => {
                pieces.push(Piece { triangle: at.triangle, a: at.position, b: q, offset });
                end_vertex = near_corner(surface, FlowPoint::new(at.triangle, q));
                break;
            }
            Step::Cross { s, exit, next } => {
                pieces.push(Piece { triangle: at.triangle, a: at.position, b: exit, offset });
                offset += s;
                at = next;
            }
            Step::Vertex { s, exit } => {
                if s < left - TOL {
                    return Err(FlowError::NotTransverse("section passes through a vertex".into()));
                }
                pieces.push(Piece { triangle: at.triangle, a: at.position, b: exit, offset });
                end_vertex = true;
                break;
            }
        }
    }
    pieces.retain(|p| (p.b - p.a).norm() > 1e-15);
    let mut all = pieces.clone();
    for p in &pieces {
        let tri = surface.triangle(p.triangle);
        for i in 0..3 {
            let e = tri.edge(i);
            let c = tri.corner(i);
            let on_side = |x: Vec2| (e.cross(x - c) / e.norm()).abs() <= TOL;
            if on_side(p.a) && on_side(p.b) {
                let (nt, j) = surface.partner((p.triangle, i));
                let shift = surface.triangle(nt).corner(j + 1) - c;
                all.push(Piece { triangle: nt, a: p.a + shift, b: p.b + shift, offset: p.offset });
            }
        }
    }
    Ok(DevelopedSection { length, dir, pieces, all, start_vertex, end_vertex })
}

impl DevelopedSection {
    fn point_at(&self, x: f64) -> FlowPoint {
        let p = self
            .pieces
            .iter()
            .find(|p| x <= p.offset + (p.b - p.a).norm())
            .unwrap_or_else(|| self.pieces.last().unwrap());
        FlowPoint::new(p.triangle, p.a + self.dir * (x - p.offset))
    }

    /// First point of the section met by the flow from `from` in direction
    /// `u` after positive time, as `(section position, time)`. `None` if a
    /// vertex comes first.
    fn first_hit(
        &self,
        surface: &Surface,
        from: FlowPoint,
        u: Vec2,
        budget: f64,
    ) -> Result<Option<(f64, f64)>, FlowError> {
        let mut at = from;
        let mut elapsed = 0.0;
        loop {
            let (exit, s, ended, next) = match step(surface, at, u, budget - elapsed) {
                Step::Inside(q) => (q, budget - elapsed, true, None),
                Step::Cross { s, exit, next } => (exit, s, false, Some(next)),
                Step::Vertex { s, exit } => (exit, s, false, None),
            };
            let limit = if ended { s } else { s - 1e-12 };
            let mut hit: Option<(f64, f64)> = None;
            for p in self.all.iter().filter(|p| p.triangle == at.triangle) {
                let d = p.b - p.a;
                let den = u.cross(d);
                let w = p.a - at.position;
                let h = w.cross(d) / den;
                let r = w.cross(u) / den;
                if !(-1e-12..=1.0 + 1e-12).contains(&r) || h < -1e-12 || h >= limit || elapsed + h <= 1e-12 {
                    continue;
                }
                let h = h.max(0.0);
                if hit.is_none_or(|(_, bh)| h < bh) {
                    let x = (p.offset + r * d.norm()).clamp(0.0, self.length);
                    hit = Some((x, h));
                }
            }
            if let Some((x, h)) = hit {
                return Ok(Some((x, elapsed + h)));
            }
            elapsed += s;
            let _ = exit;
            match next {
                Some(n) => at = n,
                None if ended => return Err(FlowError::NoReturn(budget)),
                None => return Ok(None),
            }
        }
    }
}

/// Whether direction `dir` points into the corner wedge at corner `i`.
fn wedge_contains(surface: &Surface, slot: (usize, usize), dir: Vec2) -> bool {
    let tri = surface.triangle(slot.0);
    let phi = tri.edge(slot.1).angle_to(dir);
    phi >= -1e-12 && phi <= tri.corner_angle(slot.1) + 1e-12
}

/// Length of the vertex-free ray from a corner along `dir`, capped.
fn ray_length(surface: &Surface, from: FlowPoint, dir: Vec2, cap: f64) -> f64 {
    let mut at = from;
    let mut total = 0.0;
    loop {
        match step(surface, at, dir, cap - total) {
            Step::Inside(_) => return cap,
            Step::Vertex { s, .. } => return total + s,
            Step::Cross { s, next, .. } => {
                total += s;
                at = next;
            }
        }
    }
}

/// The longest horizontal segment starting rightward from a singularity
/// (any vertex if there are none) and ending at the first vertex met,
/// capped at twice the longest edge.
pub fn default_section(surface: &Surface) -> Section {
    let right = Vec2::new(1.0, 0.0);
    let cap = 2.0 * surface.longest_edge().1;
    let singular: Vec<usize> = surface.singularities().iter().map(|s| s.0).collect();
    let mut best: Option<(f64, Section)> = None;
    for (v, vertex) in surface.vertices().iter().enumerate() {
        if !singular.is_empty() && !singular.contains(&v) {
            continue;
        }
        for &(t, i) in &vertex.corners {
            if !wedge_contains(surface, (t, i), right) {
                continue;
            }
            let start = surface.triangle(t).corner(i);
            let len = ray_length(surface, FlowPoint::new(t, start), right, cap);
            if best.as_ref().is_none_or(|b| len > b.0 + TOL) {
                best = Some((len, Section { triangle: t, start, vector: right * len }));
            }
        }
    }
    best.expect("every vertex has a corner facing right").1
}

/// First-return map of the flow in direction `theta` to `section`.
pub fn first_return_iet(surface: &Surface, theta: f64, section: &Section) -> Result<Iet, FlowError> {
    let u = check_direction(theta)?;
    let sec = develop_section(surface, section)?;
    if sec.dir.cross(u).abs() <= ANGLE_TOL.sin() {
        return Err(FlowError::NotTransverse(format!("section is parallel to direction {theta}")));
    }
    let total = sec.length;
    let budget = 1e4 * total;

    let mut cuts = vec![0.0, total];
    for vertex in surface.vertices() {
        for &(t, i) in &vertex.corners {
            if wedge_contains(surface, (t, i), -u) {
                let start = FlowPoint::new(t, surface.triangle(t).corner(i));
                if let Some((x, _)) = sec.first_hit(surface, start, -u, budget)? {
                    cuts.push(x);
                }
            }
        }
    }
    if !sec.start_vertex {
        let p = sec.pieces[0];
        if let Some((x, _)) = sec.first_hit(surface, FlowPoint::new(p.triangle, p.a), -u, budget)? {
            cuts.push(x);
        }
    }
    if !sec.end_vertex {
        let p = sec.pieces.last().unwrap();
        if let Some((x, _)) = sec.first_hit(surface, FlowPoint::new(p.triangle, p.b), -u, budget)? {
            cuts.push(x);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let eps = TOL * total.max(1.0);
    cuts.dedup_by(|b, a| *b - *a <= eps);
    *cuts.last_mut().unwrap() = total;

    let mut cells: Vec<(f64, f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mut shift = [0.0; 2];
        for (k, frac) in [1.0 / 3.0, 2.0 / 3.0].iter().enumerate() {
            let x = a + (b - a) * frac;
            let (y, _) = sec
                .first_hit(surface, sec.point_at(x), u, budget)?
                .ok_or_else(|| FlowError::NotPiecewiseTranslation(format!("orbit of {x} hit a vertex")))?;
            shift[k] = y - x;
        }
        if (shift[0] - shift[1]).abs() > TOL.max(1e-9 * total) {
            return Err(FlowError::NotPiecewiseTranslation(format!(
                "cell [{a}, {b}] returns with shifts {} and {}",
                shift[0], shift[1]
            )));
        }
        let d = 0.5 * (shift[0] + shift[1]);
        match cells.last_mut() {
            Some(last) if (last.2 - d).abs() <= TOL.max(1e-9 * total) => last.1 = b,
            _ => cells.push((a, b, d)),
        }
    }
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&i, &j| (cells[i].0 + cells[i].2).total_cmp(&(cells[j].0 + cells[j].2)));
    let mut expected = 0.0;
    let mut permutation = vec![0; cells.len()];
    for (pos, &i) in order.iter().enumerate() {
        let (a, b, d) = cells[i];
        if (a + d - expected).abs() > 1e-8 * total.max(1.0) {
            return Err(FlowError::NotPiecewiseTranslation(format!("image of cell [{a}, {b}] starts at {}", a + d)));
        }
        expected = b + d;
        permutation[i] = pos;
    }
    Ok(Iet::new(cells.iter().map(|c| c.1 - c.0).collect(), permutation)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{slit_tori, square_torus};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    // lower-right triangle of the unit square, corners (0,0), (1,0), (1,1)
    fn torus_point(x: f64, y: f64) -> FlowPoint {
        assert!(y < x);
        FlowPoint::new(0, Vec2::new(x, y))
    }

    #[test]
    fn slope_one_closes() {
        let s = square_torus();
        let tr = trace(&s, torus_point(0.6, 0.3), FRAC_PI_4, 10.0).unwrap();
        match tr.termination {
            Termination::Closed { period } => assert!((period - 2f64.sqrt()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        for w in tr.segments.windows(2) {
            let d = w[0].exit - w[0].entry;
            assert!((d.angle() - FRAC_PI_4).abs() < 1e-7 || d.norm() < 1e-12);
        }
    }

    #[test]
    fn vertical_through_vertex_hits() {
        let s = square_torus();
        let tr = trace(&s, torus_point(0.5, 0.25), FRAC_PI_2, 10.0).unwrap();
        assert_eq!(tr.termination, Termination::Closed { period: 1.0 });
        // the vertical through the marked point at x = 1
        let tr = trace(&s, torus_point(1.0 - 1e-14, 0.3), FRAC_PI_2, 10.0);
        assert!(matches!(tr.map(|t| t.termination), Ok(Termination::SingularityHit { .. })));
        let tr = trace(&s, torus_point(1.0, 0.3), FRAC_PI_2, 10.0).unwrap();
        match tr.termination {
            Termination::SingularityHit { time } => {
                assert!((time - 0.7).abs() < 1e-9);
                assert!((tr.total_length - 0.7).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn time_expires_with_exact_length() {
        let s = square_torus();
        let theta = (1.0f64).atan2((1.0 + 5f64.sqrt()) / 2.0);
        let tr = trace(&s, torus_point(0.6, 0.3), theta, 7.25).unwrap();
        assert_eq!(tr.termination, Termination::TimeExpired);
        let sum: f64 = tr.segments.iter().map(|g| (g.exit - g.entry).norm()).sum();
        assert!((sum - 7.25).abs() < 1e-9);
        assert!((tr.total_length - 7.25).abs() < 1e-12);
    }

    #[test]
    fn start_validation() {
        let s = square_torus();
        assert!(matches!(trace(&s, FlowPoint::new(0, Vec2::zero()), 0.3, 1.0), Err(FlowError::StartOnVertex { .. })));
        assert!(matches!(
            trace(&s, FlowPoint::new(0, Vec2::new(0.2, 0.5)), 0.3, 1.0),
            Err(FlowError::StartOutside { .. })
        ));
        assert!(matches!(trace(&s, torus_point(0.6, 0.3), 0.3, -1.0), Err(FlowError::InvalidParameter(_))));
    }

    #[test]
    fn cursor_matches_trace() {
        let s = square_torus();
        let theta = 1.1;
        let tr = trace(&s, torus_point(0.6, 0.3), theta, 5.5).unwrap();
        let mut c = FlowCursor::new(&s, torus_point(0.6, 0.3), theta).unwrap();
        for _ in 0..11 {
            c.advance(0.5).unwrap();
        }
        assert_eq!(c.position().triangle, tr.end.triangle);
        assert!(c.position().position.approx_eq(tr.end.position, 1e-9));
    }

    #[test]
    fn default_section_of_torus() {
        let sec = default_section(&square_torus());
        assert!(sec.vector.approx_eq(Vec2::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn torus_rotation_iets() {
        let s = square_torus();
        let sec = default_section(&s);
        let t = first_return_iet(&s, (1.0f64).atan2(0.5), &sec).unwrap();
        assert_eq!(t.permutation(), &[1, 0]);
        assert!((t.lengths()[0] - 0.5).abs() < 1e-9 && (t.lengths()[1] - 0.5).abs() < 1e-9);

        let id = first_return_iet(&s, FRAC_PI_2, &sec).unwrap();
        assert_eq!(id.len(), 1);
        assert!((id.lengths()[0] - 1.0).abs() < 1e-12);

        assert!(matches!(first_return_iet(&s, 0.0, &sec), Err(FlowError::NotTransverse(_))));
    }

    #[test]
    fn slit_tori_iets() {
        let s = slit_tori(0.5).unwrap();
        let sec = default_section(&s);
        // the slit is vertical, so vertical leaves never cross it
        let id = first_return_iet(&s, FRAC_PI_2, &sec).unwrap();
        assert_eq!(id.len(), 1);
        // generic direction: 2g + s - 1 = 5 intervals
        let t = first_return_iet(&s, 1.2345, &sec).unwrap();
        assert_eq!(t.len(), 5);
        assert!((t.total() - 1.0).abs() < 1e-12);
        let mut image: Vec<(f64, f64)> = (0..5).map(|i| (t.starts()[i] + t.shifts()[i], t.lengths()[i])).collect();
        image.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut end = 0.0;
        for (a, l) in image {
            assert!((a - end).abs() < 1e-9);
            end = a + l;
        }
    }

    #[test]
    fn torus_iet_is_rotation_by_cotangent() {
        let s = square_torus();
        let sec = default_section(&s);
        for k in 1..20 {
            let theta = 0.15 + 2.8 * k as f64 / 20.0;
            let t = first_return_iet(&s, theta, &sec).unwrap();
            let rot = (1.0 / theta.tan()).rem_euclid(1.0);
            for &x in &[0.05, 0.3, 0.55, 0.8, 0.97] {
                let expect = (x + rot).rem_euclid(1.0);
                let got = t.apply(x).unwrap();
                let d = (got - expect).abs();
                assert!(d < 1e-8 || (1.0 - d) < 1e-8, "θ={theta} x={x}: {got} vs {expect}");
            }
        }
    }
}

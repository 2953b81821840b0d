//! Surface constructors: polygon gluings, named examples, and the unfolding
//! of rational polygonal billiards.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Mat2, Triangle, Vec2};
use crate::scalar::{Real, ANGLE_TOL, TOL};
use crate::surface::{Slot, SurfaceData, SurfaceError, TranslationSurface};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BuildError {
    #[error("sides do not match: {0}")]
    PairingMismatch(String),
    #[error("glued polygons produce a cone angle that is not a multiple of 2π (vertex {vertex}, angle {angle})")]
    NonIntegerCone { vertex: usize, angle: f64 },
    #[error("degenerate polygon {polygon}: {detail}")]
    DegeneratePolygon { polygon: usize, detail: String },
    #[error("slit height {0} outside (0, 1)")]
    LambdaOutOfRange(f64),
    #[error("angle at vertex {vertex} is not a rational multiple of π")]
    IrrationalAngle { vertex: usize },
    #[error("polygon is not simple: {0}")]
    NonSimplePolygon(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl BuildError {
    pub fn code(&self) -> &'static str {
        match self {
            BuildError::PairingMismatch(_) => "PairingMismatch",
            BuildError::NonIntegerCone { .. } => "NonIntegerCone",
            BuildError::DegeneratePolygon { .. } => "DegeneratePolygon",
            BuildError::LambdaOutOfRange(_) => "LambdaOutOfRange",
            BuildError::IrrationalAngle { .. } => "IrrationalAngle",
            BuildError::NonSimplePolygon(_) => "NonSimplePolygon",
            BuildError::Surface(e) => e.code(),
        }
    }
}

/// Polygons with counterclockwise vertex loops and a pairing of their sides.
/// Side `s` of a polygon runs from vertex `s` to vertex `s + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct PolygonSpec<T> {
    pub polygons: Vec<Vec<Vec2<T>>>,
    pub pairings: Vec<[(usize, usize); 2]>,
}

fn polygon_area<T: Real>(poly: &[Vec2<T>]) -> T {
    let n = poly.len();
    (0..n).fold(T::zero(), |acc, i| acc + poly[i].cross(poly[(i + 1) % n])) / T::lit(2.0)
}

fn segments_cross<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, d: Vec2<T>, tol: T) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
}

fn is_simple<T: Real>(poly: &[Vec2<T>]) -> bool {
    let n = poly.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], T::zero()) {
                return false;
            }
        }
    }
    true
}

fn in_closed_triangle<T: Real>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, tol: T) -> bool {
    (b - a).cross(p - a) >= -tol && (c - b).cross(p - b) >= -tol && (a - c).cross(p - c) >= -tol
}

/// Triangulates a counterclockwise simple polygon: a fan from vertex 0 when
/// strictly convex, ear clipping otherwise. Returns corner index triples.
pub fn triangulate_polygon<T: Real>(poly: &[Vec2<T>]) -> Option<Vec<[usize; 3]>> {
    let n = poly.len();
    let tol = T::tol();
    let turn = |i: usize, j: usize, k: usize| (poly[j] - poly[i]).cross(poly[k] - poly[j]);
    let convex = (0..n).all(|i| turn((i + n - 1) % n, i, (i + 1) % n) > tol);
    if convex {
        return Some((1..n - 1).map(|i| [0, i, i + 1]).collect());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&k| {
            let (a, b, c) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            if turn(a, b, c) <= tol {
                return false;
            }
            idx.iter().all(|&o| {
                o == a
                    || o == b
                    || o == c
                    || poly[o].approx_eq(poly[a], tol)
                    || poly[o].approx_eq(poly[c], tol)
                    || !in_closed_triangle(poly[o], poly[a], poly[b], poly[c], tol)
            })
        })?;
        out.push([idx[(ear + m - 1) % m], idx[ear], idx[(ear + 1) % m]]);
        idx.remove(ear);
    }
    if turn(idx[0], idx[1], idx[2]) <= tol {
        return None;
    }
    out.push([idx[0], idx[1], idx[2]]);
    Some(out)
}

/// Glues polygons along paired sides into a triangulated translation surface.
pub fn from_polygons<T: Real>(spec: &PolygonSpec<T>) -> Result<TranslationSurface<T>, BuildError> {
    let tol = T::tol();
    for (p, poly) in spec.polygons.iter().enumerate() {
        let bad = |detail: &str| BuildError::DegeneratePolygon { polygon: p, detail: detail.into() };
        if poly.len() < 3 {
            return Err(bad("fewer than three vertices"));
        }
        if !poly.iter().all(|v| v.is_finite()) {
            return Err(bad("non-finite vertex"));
        }
        if polygon_area(poly) <= tol {
            return Err(bad("non-positive signed area (clockwise or flat)"));
        }
        if !is_simple(poly) {
            return Err(bad("self-intersecting boundary"));
        }
    }
    let side = |p: usize, s: usize| -> Vec2<T> {
        let poly = &spec.polygons[p];
        poly[(s + 1) % poly.len()] - poly[s]
    };
    let mut used: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &[a, b]) in spec.pairings.iter().enumerate() {
        for s in [a, b] {
            if s.0 >= spec.polygons.len() || s.1 >= spec.polygons[s.0].len() {
                return Err(BuildError::PairingMismatch(format!("side {s:?} does not exist")));
            }
            if used.insert(s, k).is_some() {
                return Err(BuildError::PairingMismatch(format!("side {s:?} paired twice")));
            }
        }
        if !(side(a.0, a.1) + side(b.0, b.1)).approx_eq(Vec2::zero(), tol) {
            return Err(BuildError::PairingMismatch(format!(
                "sides {a:?} and {b:?} are not parallel of equal length with opposite orientation"
            )));
        }
    }
    for (p, poly) in spec.polygons.iter().enumerate() {
        for s in 0..poly.len() {
            if !used.contains_key(&(p, s)) {
                return Err(BuildError::PairingMismatch(format!("side {:?} unpaired", (p, s))));
            }
        }
    }

    let mut triangles = Vec::new();
    let mut gluings = Vec::new();
    // directed polygon sides (p, from, to) -> slot
    let mut side_slot: HashMap<(usize, usize, usize), Slot> = HashMap::new();
    for (p, poly) in spec.polygons.iter().enumerate() {
        let n = poly.len();
        let tris = triangulate_polygon(poly)
            .ok_or_else(|| BuildError::DegeneratePolygon { polygon: p, detail: "no valid triangulation".into() })?;
        for [a, b, c] in tris {
            let t = triangles.len();
            triangles.push(Triangle::from_corners(poly[a], poly[b], poly[c]));
            for (e, (u, v)) in [(a, b), (b, c), (c, a)].into_iter().enumerate() {
                if v == (u + 1) % n {
                    side_slot.insert((p, u, v), (t, e));
                } else if let Some(other) = side_slot.remove(&(p, v, u)) {
                    gluings.push([other, (t, e)]);
                } else {
                    side_slot.insert((p, u, v), (t, e));
                }
            }
        }
    }
    for &[a, b] in &spec.pairings {
        let na = spec.polygons[a.0].len();
        let nb = spec.polygons[b.0].len();
        let sa = side_slot[&(a.0, a.1, (a.1 + 1) % na)];
        let sb = side_slot[&(b.0, b.1, (b.1 + 1) % nb)];
        gluings.push([sa, sb]);
    }
    let data = SurfaceData { name: None, triangles, gluings };
    TranslationSurface::try_from(data).map_err(|e| match e {
        SurfaceError::BadConeAngle { vertex, angle } => BuildError::NonIntegerCone { vertex, angle },
        e => BuildError::Surface(e),
    })
}

fn unit_square() -> Vec<Vec2<f64>> {
    vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]
}

/// The flat torus `R²/Z²` with the origin as marked point.
pub fn square_torus() -> TranslationSurface<f64> {
    let spec = PolygonSpec { polygons: vec![unit_square()], pairings: vec![[(0, 0), (0, 2)], [(0, 1), (0, 3)]] };
    from_polygons(&spec).expect("square torus is valid").with_name("square_torus")
}

/// Polygon data of the L-shaped three-square surface: squares at `(0,0)`,
/// `(1,0)` and `(0,1)`.
pub fn three_square_spec() -> PolygonSpec<f64> {
    PolygonSpec {
        polygons: vec![unit_square(), unit_square(), unit_square()],
        pairings: vec![
            [(0, 1), (1, 3)],
            [(0, 3), (1, 1)],
            [(0, 2), (2, 0)],
            [(0, 0), (2, 2)],
            [(1, 2), (1, 0)],
            [(2, 3), (2, 1)],
        ],
    }
}

/// Genus-2 three-square surface with a single cone point of angle 6π.
pub fn three_square() -> TranslationSurface<f64> {
    from_polygons(&three_square_spec()).expect("three-square surface is valid").with_name("three_square")
}

/// Polygon data for two unit tori glued crosswise along a vertical slit of
/// height `lambda`. Each torus is a unit square whose vertical sides are
/// subdivided at the slit endpoint, so every polygon vertex is a slit end.
pub fn slit_tori_spec(lambda: f64) -> Result<PolygonSpec<f64>, BuildError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(BuildError::LambdaOutOfRange(lambda));
    }
    let hexagon = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, lambda),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(0.0, lambda),
    ];
    Ok(PolygonSpec {
        polygons: vec![hexagon.clone(), hexagon],
        pairings: vec![
            [(0, 0), (0, 3)],
            [(1, 0), (1, 3)],
            [(0, 2), (0, 4)],
            [(1, 2), (1, 4)],
            [(0, 1), (1, 5)],
            [(1, 1), (0, 5)],
        ],
    })
}

/// Two unit tori glued along a vertical slit of height `lambda ∈ (0, 1)`:
/// genus 2, two cone points of angle 4π, area 2.
pub fn slit_tori(lambda: f64) -> Result<TranslationSurface<f64>, BuildError> {
    let s = from_polygons(&slit_tori_spec(lambda)?)?;
    Ok(s.with_name(format!("slit_tori_{lambda}")))
}

/// Polygon whose interior angles are `π p_i / q_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalPolygon {
    pub vertices: Vec<Vec2<f64>>,
    /// `(p_i, q_i)` in lowest terms, one per vertex.
    pub angles: Vec<(u64, u64)>,
}

const MAX_ANGLE_DENOMINATOR: u64 = 100;
const MAX_GROUP_ORDER: usize = 10_000;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn interior_angles(vertices: &[Vec2<f64>]) -> Vec<f64> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let next = vertices[(i + 1) % n] - vertices[i];
            let prev = vertices[(i + n - 1) % n] - vertices[i];
            let a = next.angle_to(prev);
            if a <= 0.0 {
                a + std::f64::consts::TAU
            } else {
                a
            }
        })
        .collect()
}

fn check_polygon(vertices: &[Vec2<f64>]) -> Result<(), BuildError> {
    if vertices.len() < 3 || !vertices.iter().all(|v| v.is_finite()) {
        return Err(BuildError::NonSimplePolygon("fewer than three finite vertices".into()));
    }
    if polygon_area(vertices) <= TOL {
        return Err(BuildError::NonSimplePolygon("vertices are not counterclockwise".into()));
    }
    if !is_simple(vertices) {
        return Err(BuildError::NonSimplePolygon("boundary self-intersects".into()));
    }
    Ok(())
}

impl RationalPolygon {
    /// Reads the angles off the vertices, looking for `p/q` with
    /// `q ≤ 100` matching each angle within the angular tolerance.
    pub fn from_vertices(vertices: Vec<Vec2<f64>>) -> Result<Self, BuildError> {
        check_polygon(&vertices)?;
        let mut angles = Vec::with_capacity(vertices.len());
        for (i, a) in interior_angles(&vertices).into_iter().enumerate() {
            let x = a / std::f64::consts::PI;
            let frac = (1..=MAX_ANGLE_DENOMINATOR)
                .map(|q| ((x * q as f64).round() as u64, q))
                .find(|&(p, q)| ((p as f64 / q as f64 - x) * std::f64::consts::PI).abs() <= ANGLE_TOL)
                .ok_or(BuildError::IrrationalAngle { vertex: i })?;
            angles.push(frac);
        }
        Ok(RationalPolygon { vertices, angles })
    }

    /// Checks the stated fractions against the geometry and reduces them.
    pub fn new(vertices: Vec<Vec2<f64>>, angles: Vec<(u64, u64)>) -> Result<Self, BuildError> {
        check_polygon(&vertices)?;
        if angles.len() != vertices.len() {
            return Err(BuildError::DegeneratePolygon { polygon: 0, detail: "one angle per vertex required".into() });
        }
        let actual = interior_angles(&vertices);
        let mut reduced = Vec::with_capacity(angles.len());
        for (i, (&(p, q), a)) in angles.iter().zip(actual).enumerate() {
            if q == 0 || p == 0 {
                return Err(BuildError::IrrationalAngle { vertex: i });
            }
            let stated = std::f64::consts::PI * p as f64 / q as f64;
            if (stated - a).abs() > ANGLE_TOL {
                return Err(BuildError::DegeneratePolygon {
                    polygon: 0,
                    detail: format!("vertex {i}: stated angle {stated} but polygon has {a}"),
                });
            }
            let g = gcd(p, q);
            reduced.push((p / g, q / g));
        }
        Ok(RationalPolygon { vertices, angles: reduced })
    }

    /// `2 · lcm(q_i)`, the order of the reflection group.
    pub fn expected_group_order(&self) -> u64 {
        2 * self.angles.iter().fold(1, |l, &(_, q)| l / gcd(l, q) * q)
    }
}

/// Closure of the linear parts of the side reflections, in breadth-first
/// order from the identity.
pub fn reflection_group(vertices: &[Vec2<f64>]) -> Result<Vec<Mat2<f64>>, BuildError> {
    let n = vertices.len();
    let gens: Vec<Mat2<f64>> = (0..n).map(|i| Mat2::reflection(vertices[(i + 1) % n] - vertices[i])).collect();
    let mut group = vec![Mat2::identity()];
    let mut head = 0;
    while head < group.len() {
        let g = group[head];
        head += 1;
        for s in &gens {
            let h = *s * g;
            if !group.iter().any(|k| k.approx_eq(&h, TOL)) {
                if group.len() >= MAX_GROUP_ORDER {
                    return Err(BuildError::IrrationalAngle { vertex: 0 });
                }
                group.push(h);
            }
        }
    }
    Ok(group)
}

/// Unfolds a rational billiard into a translation surface. Returns the
/// surface and, per polygon copy, the linear map `γ` sending the billiard
/// table onto that copy.
pub fn unfold_billiard(p: &RationalPolygon) -> Result<(TranslationSurface<f64>, Vec<Mat2<f64>>), BuildError> {
    check_polygon(&p.vertices)?;
    let n = p.vertices.len();
    let group = reflection_group(&p.vertices)?;
    let index_of = |m: &Mat2<f64>| group.iter().position(|k| k.approx_eq(m, 1e-7));
    let sigma: Vec<Mat2<f64>> = (0..n).map(|i| Mat2::reflection(p.vertices[(i + 1) % n] - p.vertices[i])).collect();

    let mut polygons = Vec::with_capacity(group.len());
    // side i of the table -> side index in the copy's counterclockwise loop
    let mut side_in_copy = Vec::with_capacity(group.len());
    for g in &group {
        let mut verts: Vec<Vec2<f64>> = p.vertices.iter().map(|v| g.apply(*v)).collect();
        if g.det() < 0.0 {
            verts.reverse();
            side_in_copy.push((0..n).map(|i| (2 * n - 2 - i) % n).collect::<Vec<_>>());
        } else {
            side_in_copy.push((0..n).collect::<Vec<_>>());
        }
        polygons.push(verts);
    }
    let mut pairings = Vec::new();
    for (gi, g) in group.iter().enumerate() {
        for i in 0..n {
            let hj = index_of(&(*g * sigma[i])).ok_or(BuildError::IrrationalAngle { vertex: i })?;
            if gi < hj {
                pairings.push([(gi, side_in_copy[gi][i]), (hj, side_in_copy[hj][i])]);
            }
        }
    }
    let surface = from_polygons(&PolygonSpec { polygons, pairings })?.with_name("billiard_unfolding");
    Ok((surface, group))
}

//! Triangulated translation surfaces: data model, validation and the
//! `SL(2,R)` action.
//!
//! A surface is a list of counterclockwise triangles plus a pairing of edge
//! slots `(triangle, side)`. Paired sides carry opposite vectors and are
//! identified by a translation. Vertex classes are the orbits of triangle
//! corners under the gluing; each has a cone angle `2π(k+1)`. Classes with
//! `k = 0` are marked points and are kept as triangulation vertices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Mat2, Triangle, Vec2};
use crate::scalar::Real;

/// Edge slot: `(triangle index, side index 0..3)`.
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SurfaceError {
    #[error("surface has no triangles")]
    Empty,
    #[error("non-finite coordinate in triangle {0}")]
    NonFinite(usize),
    #[error("triangle {triangle} is degenerate: {detail}")]
    DegenerateTriangle { triangle: usize, detail: String },
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("vertex {vertex} has cone angle {angle} which is not a multiple of 2π")]
    BadConeAngle { vertex: usize, angle: f64 },
    #[error("triangles do not form a connected surface")]
    Disconnected,
    #[error("matrix is singular or not finite")]
    SingularMatrix,
    #[error("matrix reverses orientation (negative determinant)")]
    OrientationReversing,
    #[error("surface has zero area")]
    ZeroArea,
}

impl SurfaceError {
    pub fn code(&self) -> &'static str {
        match self {
            SurfaceError::Empty => "Empty",
            SurfaceError::NonFinite(_) => "NonFinite",
            SurfaceError::DegenerateTriangle { .. } => "DegenerateTriangle",
            SurfaceError::GluingMismatch(_) => "GluingMismatch",
            SurfaceError::BadConeAngle { .. } => "BadConeAngle",
            SurfaceError::Disconnected => "Disconnected",
            SurfaceError::SingularMatrix => "SingularMatrix",
            SurfaceError::OrientationReversing => "OrientationReversing",
            SurfaceError::ZeroArea => "ZeroArea",
        }
    }
}

/// Serialized form of a surface. Nothing is checked on deserialization;
/// convert with [`TranslationSurface::try_from`] or inspect with [`validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SurfaceData<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub triangles: Vec<Triangle<T>>,
    pub gluings: Vec<[Slot; 2]>,
}

/// Vertex, edge and face counts of the triangulation plus the genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCounts {
    pub s: usize,
    pub e: usize,
    pub f: usize,
    pub g: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub genus: usize,
    pub num_singularities: usize,
    pub marked_points: usize,
    /// Cone orders `k ≥ 1` of the true singularities.
    pub cone_orders: Vec<usize>,
    /// `(s, e, f)`; `s` counts every vertex class, marked points included.
    pub counts: (usize, usize, usize),
    pub messages: Vec<String>,
    #[serde(skip)]
    pub errors: Vec<SurfaceError>,
}

impl ValidationReport {
    pub fn into_result(self) -> Result<Self, SurfaceError> {
        match self.errors.first() {
            Some(e) => Err(e.clone()),
            None => Ok(self),
        }
    }
}

/// A vertex class: corners in counterclockwise order around the point.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex<T> {
    pub corners: Vec<Slot>,
    pub cone_angle: T,
    pub order: usize,
}

/// A validated triangulated translation surface. Immutable; every
/// transformation returns a new value.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationSurface<T> {
    name: Option<String>,
    triangles: Vec<Triangle<T>>,
    partner: Vec<[Slot; 3]>,
    corner_vertex: Vec<[usize; 3]>,
    /// Angle from the first corner of the vertex class to the start of this
    /// corner, going counterclockwise.
    corner_offset: Vec<[T; 3]>,
    vertices: Vec<Vertex<T>>,
    genus: usize,
}

struct Structure<T> {
    partner: Vec<[Slot; 3]>,
    corner_vertex: Vec<[usize; 3]>,
    corner_offset: Vec<[T; 3]>,
    vertices: Vec<Vertex<T>>,
}

fn build_partner<T: Real>(data: &SurfaceData<T>) -> Result<Vec<[Slot; 3]>, SurfaceError> {
    let n = data.triangles.len();
    let mut partner: Vec<[Option<Slot>; 3]> = vec![[None; 3]; n];
    let set = |a: Slot, b: Slot, p: &mut Vec<[Option<Slot>; 3]>| -> Result<(), SurfaceError> {
        if a.0 >= n || a.1 >= 3 {
            return Err(SurfaceError::GluingMismatch(format!("slot {a:?} out of range")));
        }
        if p[a.0][a.1].is_some() {
            return Err(SurfaceError::GluingMismatch(format!("slot {a:?} glued twice")));
        }
        p[a.0][a.1] = Some(b);
        Ok(())
    };
    for &[a, b] in &data.gluings {
        if a == b {
            return Err(SurfaceError::GluingMismatch(format!("slot {a:?} glued to itself")));
        }
        set(a, b, &mut partner)?;
        set(b, a, &mut partner)?;
    }
    let mut out = Vec::with_capacity(n);
    for (t, row) in partner.iter().enumerate() {
        let mut r = [(0, 0); 3];
        for (e, p) in row.iter().enumerate() {
            r[e] = p.ok_or_else(|| SurfaceError::GluingMismatch(format!("slot {:?} unpaired", (t, e))))?;
        }
        out.push(r);
    }
    Ok(out)
}

fn check_triangles<T: Real>(data: &SurfaceData<T>, errors: &mut Vec<SurfaceError>) {
    let tol = T::tol();
    for (i, tri) in data.triangles.iter().enumerate() {
        if !tri.edges.iter().all(|e| e.is_finite()) {
            errors.push(SurfaceError::NonFinite(i));
            continue;
        }
        let d = tri.closure_defect();
        if d.x.abs() > tol || d.y.abs() > tol {
            errors.push(SurfaceError::DegenerateTriangle {
                triangle: i,
                detail: format!("edges do not close (defect {:?})", d),
            });
        } else if tri.signed_area() <= tol {
            errors.push(SurfaceError::DegenerateTriangle {
                triangle: i,
                detail: format!("signed area {} not positive", tri.signed_area()),
            });
        }
    }
}

fn build_structure<T: Real>(data: &SurfaceData<T>) -> Result<Structure<T>, Vec<SurfaceError>> {
    let mut errors = Vec::new();
    if data.triangles.is_empty() {
        return Err(vec![SurfaceError::Empty]);
    }
    check_triangles(data, &mut errors);
    let partner = match build_partner(data) {
        Ok(p) => p,
        Err(e) => {
            errors.push(e);
            return Err(errors);
        }
    };
    let tol = T::tol();
    for (t, row) in partner.iter().enumerate() {
        for (e, &(pt, pe)) in row.iter().enumerate() {
            if (t, e) > (pt, pe) {
                continue;
            }
            let v = data.triangles[t].edge(e);
            let w = data.triangles[pt].edge(pe);
            if !(v + w).approx_eq(Vec2::zero(), tol) {
                errors.push(SurfaceError::GluingMismatch(format!(
                    "slots {:?} and {:?} carry non-opposite vectors {:?}, {:?}",
                    (t, e),
                    (pt, pe),
                    v,
                    w
                )));
            }
        }
    }

    // connectivity
    let n = data.triangles.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(t) = queue.pop_front() {
        for &(pt, _) in &partner[t] {
            if !seen[pt] {
                seen[pt] = true;
                queue.push_back(pt);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        errors.push(SurfaceError::Disconnected);
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    // vertex classes: orbits of the counterclockwise corner successor
    let next = |(t, i): Slot| -> Slot { partner[t][(i + 2) % 3] };
    let mut corner_vertex = vec![[usize::MAX; 3]; n];
    let mut corner_offset = vec![[T::zero(); 3]; n];
    let mut vertices = Vec::new();
    let two_pi = T::TAU();
    for t in 0..n {
        for i in 0..3 {
            if corner_vertex[t][i] != usize::MAX {
                continue;
            }
            let id = vertices.len();
            let mut corners = Vec::new();
            let mut total = T::zero();
            let mut c = (t, i);
            loop {
                corner_vertex[c.0][c.1] = id;
                corner_offset[c.0][c.1] = total;
                corners.push(c);
                total = total + data.triangles[c.0].corner_angle(c.1);
                c = next(c);
                if c == (t, i) {
                    break;
                }
                if corner_vertex[c.0][c.1] != usize::MAX {
                    return Err(vec![SurfaceError::GluingMismatch("corner cycle is not a permutation".into())]);
                }
            }
            let turns = (total / two_pi).round();
            let residual = (total - turns * two_pi).abs();
            if turns < T::one() || residual > T::angle_tol() {
                errors.push(SurfaceError::BadConeAngle { vertex: id, angle: total.to_f64().unwrap_or(f64::NAN) });
            }
            let order = turns.to_usize().unwrap_or(1).max(1) - 1;
            vertices.push(Vertex { corners, cone_angle: total, order });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(Structure { partner, corner_vertex, corner_offset, vertices })
}

/// Checks every surface invariant. Never panics on well-typed input.
pub fn validate<T: Real>(data: &SurfaceData<T>) -> ValidationReport {
    let mut report = ValidationReport {
        ok: false,
        genus: 0,
        num_singularities: 0,
        marked_points: 0,
        cone_orders: Vec::new(),
        counts: (0, 0, 0),
        messages: Vec::new(),
        errors: Vec::new(),
    };
    let st = match build_structure(data) {
        Ok(st) => st,
        Err(errors) => {
            report.messages = errors.iter().map(|e| e.to_string()).collect();
            report.errors = errors;
            return report;
        }
    };
    let f = data.triangles.len();
    let e = 3 * f / 2;
    let s = st.vertices.len();
    report.counts = (s, e, f);
    // s - e + f = 2 - 2g
    let chi = s as i64 - e as i64 + f as i64;
    if 3 * f != 2 * e || chi > 2 || (2 - chi) % 2 != 0 {
        let err = SurfaceError::GluingMismatch(format!("inconsistent Euler characteristic {chi}"));
        report.messages.push(err.to_string());
        report.errors.push(err);
        return report;
    }
    let g = ((2 - chi) / 2) as usize;
    let sum_k: usize = st.vertices.iter().map(|v| v.order).sum();
    if sum_k + 2 != 2 * g {
        let err = SurfaceError::BadConeAngle { vertex: 0, angle: f64::NAN };
        report.messages.push(format!("cone orders sum to {sum_k} but 2g-2 = {}", 2 * g as i64 - 2));
        report.errors.push(err);
        return report;
    }
    report.ok = true;
    report.genus = g;
    report.cone_orders = st.vertices.iter().filter(|v| v.order > 0).map(|v| v.order).collect();
    report.num_singularities = report.cone_orders.len();
    report.marked_points = s - report.num_singularities;
    report
}

impl<T: Real> TryFrom<SurfaceData<T>> for TranslationSurface<T> {
    type Error = SurfaceError;

    fn try_from(data: SurfaceData<T>) -> Result<Self, SurfaceError> {
        let report = validate(&data).into_result()?;
        let st = build_structure(&data).map_err(|mut e| e.remove(0))?;
        Ok(TranslationSurface {
            name: data.name,
            triangles: data.triangles,
            partner: st.partner,
            corner_vertex: st.corner_vertex,
            corner_offset: st.corner_offset,
            vertices: st.vertices,
            genus: report.genus,
        })
    }
}

impl<T: Real> TranslationSurface<T> {
    /// Builds and validates a surface from triangles and slot pairs.
    pub fn new(triangles: Vec<Triangle<T>>, gluings: Vec<[Slot; 2]>) -> Result<Self, SurfaceError> {
        SurfaceData { name: None, triangles, gluings }.try_into()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn to_data(&self) -> SurfaceData<T> {
        SurfaceData { name: self.name.clone(), triangles: self.triangles.clone(), gluings: self.gluings() }
    }

    pub fn triangles(&self) -> &[Triangle<T>] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &Triangle<T> {
        &self.triangles[t]
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// The slot glued to `slot`.
    #[inline]
    pub fn partner(&self, (t, e): Slot) -> Slot {
        self.partner[t][e]
    }

    /// Canonical list of slot pairs `[a, b]` with `a < b`, ordered by `a`.
    /// The index in this list is the gluing (edge) id.
    pub fn gluings(&self) -> Vec<[Slot; 2]> {
        let mut out = Vec::with_capacity(3 * self.triangles.len() / 2);
        for t in 0..self.triangles.len() {
            for e in 0..3 {
                let p = self.partner[t][e];
                if (t, e) < p {
                    out.push([(t, e), p]);
                }
            }
        }
        out
    }

    /// Gluing id of the edge containing `slot`.
    pub fn edge_id(&self, slot: Slot) -> usize {
        let key = slot.min(self.partner(slot));
        self.gluings().iter().position(|g| g[0] == key).expect("slot belongs to a gluing")
    }

    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    /// Vertex class of corner `i` of triangle `t`.
    #[inline]
    pub fn vertex_of(&self, (t, i): Slot) -> usize {
        self.corner_vertex[t][i % 3]
    }

    /// Counterclockwise angle from the reference direction of the corner's
    /// vertex class to the first side of the corner.
    #[inline]
    pub fn corner_offset(&self, (t, i): Slot) -> T {
        self.corner_offset[t][i % 3]
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `(s, e, f, g)`; satisfies `f = 2(s + 2g - 2)` and `2e = 3f`.
    pub fn euler_counts(&self) -> EulerCounts {
        let f = self.triangles.len();
        EulerCounts { s: self.vertices.len(), e: 3 * f / 2, f, g: self.genus }
    }

    /// Vertex classes with cone order at least one.
    pub fn singularities(&self) -> Vec<(usize, usize)> {
        self.vertices.iter().enumerate().filter(|(_, v)| v.order > 0).map(|(i, v)| (i, v.order)).collect()
    }

    pub fn area(&self) -> T {
        self.triangles.iter().fold(T::zero(), |acc, t| acc + t.signed_area())
    }

    /// Image of the surface under `m`: every edge vector `v` becomes `m v`.
    pub fn apply_matrix(&self, m: &Mat2<T>) -> Result<Self, SurfaceError> {
        let det = m.det();
        if !m.is_finite() || det.abs() <= T::epsilon() {
            return Err(SurfaceError::SingularMatrix);
        }
        if det < T::zero() {
            return Err(SurfaceError::OrientationReversing);
        }
        let data = SurfaceData {
            name: self.name.clone(),
            triangles: self.triangles.iter().map(|t| t.map(m)).collect(),
            gluings: self.gluings(),
        };
        data.try_into()
    }

    /// Scales by `area^{-1/2}` so the result has unit area.
    pub fn normalize_area(&self) -> Result<Self, SurfaceError> {
        let a = self.area();
        if a <= T::zero() {
            return Err(SurfaceError::ZeroArea);
        }
        let s = a.sqrt().recip();
        self.apply_matrix(&Mat2::new(s, T::zero(), T::zero(), s))
    }

    /// Longest edge length and its gluing id (lowest id on ties).
    pub fn longest_edge(&self) -> (usize, T) {
        let mut best = (0, T::neg_infinity());
        for (id, g) in self.gluings().iter().enumerate() {
            let l = self.triangles[g[0].0].edge(g[0].1).norm();
            if l > best.1 {
                best = (id, l);
            }
        }
        best
    }
}

/// Free-function form of [`TranslationSurface::apply_matrix`].
pub fn apply_matrix<T: Real>(s: &TranslationSurface<T>, m: &Mat2<T>) -> Result<TranslationSurface<T>, SurfaceError> {
    s.apply_matrix(m)
}

//! Edge flips, bounded-length retriangulation, and completion of a set of
//! disjoint saddle connections to a triangulation.

use std::collections::HashMap;

use thiserror::Error;

use crate::saddle::{enumerate_saddle_connections, intersects, systole, SaddleConnection, SaddleError};
use crate::scalar::TOL;
use crate::surface::{Slot, SurfaceError};
use crate::{Surface, Triangle, Vec2};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TriangulateError {
    #[error("edge {edge} is not flippable: {detail}")]
    NotFlippable { edge: usize, detail: String },
    #[error("edge {edge} joins a triangle to itself")]
    BoundaryOfSameTriangle { edge: usize },
    #[error("edge id {0} out of range")]
    InvalidEdge(usize),
    #[error("systole {systole} is smaller than ε0 = {eps0}")]
    SystoleTooSmall { systole: f64, eps0: f64 },
    #[error("area {0} exceeds 1")]
    AreaTooLarge(f64),
    #[error("seed connections {0} and {1} cross")]
    CrossingSeeds(usize, usize),
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("could not complete triangulation: {0}")]
    Incomplete(String),
    #[error(transparent)]
    Saddle(#[from] SaddleError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl TriangulateError {
    pub fn code(&self) -> &'static str {
        match self {
            TriangulateError::NotFlippable { .. } => "NotFlippable",
            TriangulateError::BoundaryOfSameTriangle { .. } => "BoundaryOfSameTriangle",
            TriangulateError::InvalidEdge(_) => "InvalidEdge",
            TriangulateError::SystoleTooSmall { .. } => "SystoleTooSmall",
            TriangulateError::AreaTooLarge(_) => "AreaTooLarge",
            TriangulateError::CrossingSeeds(..) => "CrossingSeeds",
            TriangulateError::BadSignature(_) => "BadSignature",
            TriangulateError::Incomplete(_) => "Incomplete",
            TriangulateError::Saddle(e) => e.code(),
            TriangulateError::Surface(e) => e.code(),
        }
    }
}

/// Edge table: per gluing id, the edge vector (as seen from the lower slot)
/// and its length.
pub fn edge_table(surface: &Surface) -> Vec<(Vec2, f64)> {
    surface
        .gluings()
        .iter()
        .map(|g| {
            let v = surface.triangle(g[0].0).edge(g[0].1);
            (v, v.norm())
        })
        .collect()
}

/// Number of edges of any triangulation with `s` vertices in genus `g`,
/// `3(s + 2g - 2)`.
pub fn max_complexity(g: usize, s: usize) -> Result<usize, TriangulateError> {
    if g < 1 || s < 1 {
        return Err(TriangulateError::BadSignature(format!("need g ≥ 1 and s ≥ 1, got g={g}, s={s}")));
    }
    Ok(3 * (s + 2 * g - 2))
}

fn strictly_convex(quad: &[Vec2; 4]) -> bool {
    (0..4).all(|i| {
        let a = quad[(i + 3) % 4];
        let b = quad[i];
        let c = quad[(i + 1) % 4];
        let (u, v) = (b - a, c - b);
        u.cross(v) > TOL * u.norm() * v.norm()
    })
}

/// Replaces the diagonal `edge` of the quadrilateral formed by its two
/// triangles with the other diagonal. The two triangles keep their indices;
/// the new diagonal is side 2 of both.
pub fn flip_edge(surface: &Surface, edge: usize) -> Result<Surface, TriangulateError> {
    let gluings = surface.gluings();
    let &[(t, k), (t2, j)] = gluings.get(edge).ok_or(TriangulateError::InvalidEdge(edge))?;
    if t == t2 {
        return Err(TriangulateError::BoundaryOfSameTriangle { edge });
    }
    let tri = surface.triangle(t);
    let tri2 = surface.triangle(t2);
    let a = Vec2::zero();
    let c = tri.edge(k);
    let b = c + tri.edge(k + 1);
    let b2 = tri2.edge(j + 1);
    let quad = [a, b2, c, b];
    if !strictly_convex(&quad) {
        return Err(TriangulateError::NotFlippable {
            edge,
            detail: format!("quadrilateral {quad:?} is not strictly convex"),
        });
    }
    let mut triangles = surface.triangles().to_vec();
    triangles[t] = Triangle::from_corners(b, a, b2);
    triangles[t2] = Triangle::from_corners(b2, c, b);

    let moved: [(Slot, Slot); 4] = [
        ((t, (k + 1) % 3), (t2, 1)),
        ((t, (k + 2) % 3), (t, 0)),
        ((t2, (j + 1) % 3), (t, 1)),
        ((t2, (j + 2) % 3), (t2, 0)),
    ];
    let remap = |s: Slot| moved.iter().find(|m| m.0 == s).map(|m| m.1).unwrap_or(s);
    let mut pairs: Vec<[Slot; 2]> = Vec::with_capacity(gluings.len());
    for (id, g) in gluings.iter().enumerate() {
        if id == edge {
            continue;
        }
        pairs.push([remap(g[0]), remap(g[1])]);
    }
    pairs.push([(t, 2), (t2, 2)]);
    let out = Surface::new(triangles, pairs)?;
    Ok(match surface.name() {
        Some(n) => out.with_name(n),
        None => out,
    })
}

/// Gluing id of the diagonal created by [`flip_edge`] on triangles `t`, `t2`.
pub fn flipped_edge_id(surface: &Surface, t: usize) -> usize {
    surface.edge_id((t, 2))
}

/// Result of [`retriangulate_bounded`].
#[derive(Clone, Debug)]
pub struct Retriangulation {
    pub surface: Surface,
    /// The bound `4 / (√3 ε0)`.
    pub bound: f64,
    pub flips: usize,
    /// `(longest edge length, number of edges attaining it)` before each flip
    /// and after the last one.
    pub progress: Vec<(f64, usize)>,
}

fn longest_profile(surface: &Surface) -> (usize, f64, usize) {
    let (id, k) = surface.longest_edge();
    let count = edge_table(surface).iter().filter(|e| e.1 >= k * (1.0 - 1e-12)).count();
    (id, k, count)
}

/// Flips longest edges until every edge is at most `4 / (√3 ε0)`. Requires
/// area at most one and systole at least `ε0`.
pub fn retriangulate_bounded(surface: &Surface, eps0: f64) -> Result<Retriangulation, TriangulateError> {
    if !(eps0 > 0.0) {
        return Err(TriangulateError::SystoleTooSmall { systole: f64::NAN, eps0 });
    }
    let area = surface.area();
    if area > 1.0 + TOL {
        return Err(TriangulateError::AreaTooLarge(area));
    }
    let sys = systole(surface)?;
    if sys < eps0 * (1.0 - 1e-9) {
        return Err(TriangulateError::SystoleTooSmall { systole: sys, eps0 });
    }
    let bound = 4.0 / (3f64.sqrt() * eps0);
    let (_, k0, _) = longest_profile(surface);
    let e = surface.euler_counts().e;
    let cap = (((k0 - bound) / (eps0 / 2.0)).ceil().max(0.0) as usize + 1) * e;

    let mut current = surface.clone();
    let mut progress = Vec::new();
    let mut flips = 0;
    loop {
        let (id, k, count) = longest_profile(&current);
        progress.push((k, count));
        if k <= bound {
            break;
        }
        if flips >= cap {
            return Err(TriangulateError::NotFlippable {
                edge: id,
                detail: format!("flip cap {cap} reached with longest edge {k} > {bound}"),
            });
        }
        current = flip_edge(&current, id).map_err(|err| match err {
            TriangulateError::NotFlippable { edge, detail } => TriangulateError::NotFlippable {
                edge,
                detail: format!("{detail}; state: {}", serde_json::to_string(&current.to_data()).unwrap_or_default()),
            },
            other => other,
        })?;
        flips += 1;
    }
    Ok(Retriangulation { surface: current, bound, flips, progress })
}

struct HalfEdge {
    vertex: usize,
    angle: f64,
    hol: Vec2,
}

/// Builds the triangulation whose edges are the given saddle connections.
fn triangulation_from_edges(surface: &Surface, edges: &[SaddleConnection]) -> Result<Surface, TriangulateError> {
    let mut half = Vec::with_capacity(2 * edges.len());
    for c in edges {
        half.push(HalfEdge { vertex: c.start, angle: c.start_angle, hol: c.holonomy });
        half.push(HalfEdge { vertex: c.end, angle: c.end_angle, hol: -c.holonomy });
    }
    let twin = |h: usize| h ^ 1;
    let mut around: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, h) in half.iter().enumerate() {
        around.entry(h.vertex).or_default().push(i);
    }
    let mut position = vec![0usize; half.len()];
    for (&v, list) in around.iter_mut() {
        let cone = surface.vertices()[v].cone_angle;
        list.sort_by(|&a, &b| half[a].angle.rem_euclid(cone).total_cmp(&half[b].angle.rem_euclid(cone)));
        for (p, &h) in list.iter().enumerate() {
            position[h] = p;
        }
    }
    // the face to the left of h continues with the clockwise neighbour of
    // twin(h) around the endpoint
    let next = |h: usize| {
        let tw = twin(h);
        let list = &around[&half[tw].vertex];
        list[(position[tw] + list.len() - 1) % list.len()]
    };
    let mut face_of = vec![usize::MAX; half.len()];
    let mut triangles = Vec::new();
    for h in 0..half.len() {
        if face_of[h] != usize::MAX {
            continue;
        }
        let (h1, h2) = (next(h), next(next(h)));
        if next(h2) != h {
            return Err(TriangulateError::Incomplete("a face is not a triangle".into()));
        }
        let f = triangles.len();
        for (slot, &x) in [h, h1, h2].iter().enumerate() {
            face_of[x] = f * 3 + slot;
        }
        triangles.push(Triangle::new(half[h].hol, half[h1].hol, half[h2].hol));
    }
    let gluings = (0..half.len())
        .step_by(2)
        .map(|h| [(face_of[h] / 3, face_of[h] % 3), (face_of[h + 1] / 3, face_of[h + 1] % 3)])
        .collect();
    Ok(Surface::new(triangles, gluings)?)
}

/// Extends pairwise non-crossing `seed` connections to a triangulation of
/// the same flat surface, adding shortest admissible connections first.
pub fn complete_to_triangulation(surface: &Surface, seed: &[SaddleConnection]) -> Result<Surface, TriangulateError> {
    for i in 0..seed.len() {
        for j in i + 1..seed.len() {
            if intersects(&seed[i], &seed[j], surface) {
                return Err(TriangulateError::CrossingSeeds(i, j));
            }
        }
    }
    let target = surface.euler_counts().e;
    let mut edges: Vec<SaddleConnection> = Vec::with_capacity(target);
    for c in seed {
        if !edges.iter().any(|e| e.same_segment(c, surface)) {
            edges.push(c.clone());
        }
    }
    if edges.len() > target {
        return Err(TriangulateError::Incomplete(format!("{} seeds exceed {target} edges", edges.len())));
    }
    let longest_seed = edges.iter().map(|c| c.length()).fold(0.0, f64::max);
    let mut len = systole(surface)?.max(longest_seed);
    for _ in 0..40 {
        if edges.len() == target {
            break;
        }
        for c in enumerate_saddle_connections(surface, len)? {
            if edges.len() == target {
                break;
            }
            if edges.iter().any(|e| e.same_segment(&c, surface) || intersects(e, &c, surface)) {
                continue;
            }
            edges.push(c);
        }
        len *= 2.0;
    }
    if edges.len() != target {
        return Err(TriangulateError::Incomplete(format!("found {} of {target} edges", edges.len())));
    }
    let out = triangulation_from_edges(surface, &edges)?;
    Ok(match surface.name() {
        Some(n) => out.with_name(n),
        None => out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{slit_tori, square_torus, three_square};
    use crate::Mat2;

    fn sorted_edges(s: &Surface) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = s
            .triangles()
            .iter()
            .flat_map(|t| t.edges.iter().map(|e| ((e.x * 1e8).round() as i64, (e.y * 1e8).round() as i64)))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn complexity_bound() {
        assert_eq!(max_complexity(1, 1).unwrap(), 3);
        assert_eq!(max_complexity(2, 1).unwrap(), 9);
        assert_eq!(max_complexity(2, 2).unwrap(), 12);
        assert!(matches!(max_complexity(0, 1), Err(TriangulateError::BadSignature(_))));
    }

    #[test]
    fn torus_diagonal_flip() {
        let s = square_torus();
        let diag = (0..3).find(|&id| (edge_table(&s)[id].1 - 2f64.sqrt()).abs() < 1e-12).unwrap();
        let f = flip_edge(&s, diag).unwrap();
        assert_eq!(f.euler_counts(), s.euler_counts());
        assert!((f.area() - 1.0).abs() < 1e-12);
        let lens: Vec<f64> = edge_table(&f).iter().map(|e| e.1).collect();
        // other diagonal (1,-1) also has length √2
        assert!(lens.iter().any(|l| (l - 2f64.sqrt()).abs() < 1e-12));
        let diag_vec = f.triangle(0).edge(2);
        assert!((diag_vec.x.abs() - 1.0).abs() < 1e-12 && (diag_vec.y.abs() - 1.0).abs() < 1e-12);
        assert!(diag_vec.x * diag_vec.y < 0.0);

        let back = flip_edge(&f, flipped_edge_id(&f, 0)).unwrap();
        assert_eq!(sorted_edges(&back), sorted_edges(&s));
    }

    #[test]
    fn convexity_test() {
        let sq = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        assert!(strictly_convex(&sq));
        let dart = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 1.0), Vec2::new(0.0, 2.0), Vec2::new(0.5, 1.0)];
        assert!(!strictly_convex(&dart));
        let flat = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(1.0, 1.0)];
        assert!(!strictly_convex(&flat));
    }

    #[test]
    fn unflippable_edges_after_a_flip() {
        let s = flip_edge(&three_square(), 0).unwrap();
        let results: Vec<_> = (0..s.euler_counts().e).map(|id| flip_edge(&s, id)).collect();
        assert!(results.iter().any(|r| matches!(r, Err(TriangulateError::NotFlippable { .. }))));
        for f in results.into_iter().flatten() {
            assert_eq!(f.euler_counts(), s.euler_counts());
            assert!((f.area() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn retriangulate_examples() {
        let s = square_torus();
        let r = retriangulate_bounded(&s, 1.0).unwrap();
        assert_eq!(r.flips, 0);
        assert!(matches!(retriangulate_bounded(&s, 2.0), Err(TriangulateError::SystoleTooSmall { .. })));

        let sheared = s.apply_matrix(&Mat2::horocycle(9.0)).unwrap();
        let r = retriangulate_bounded(&sheared, 1.0).unwrap();
        assert!(r.flips > 0);
        assert!(edge_table(&r.surface).iter().all(|e| e.1 <= r.bound + 1e-9));
        assert_eq!(r.surface.euler_counts(), s.euler_counts());
        for w in r.progress.windows(2) {
            let ((k0, c0), (k1, c1)) = (w[0], w[1]);
            assert!(k1 < k0 * (1.0 - 1e-12) || (k1 <= k0 * (1.0 + 1e-12) && c1 < c0));
        }
    }

    #[test]
    fn completion_examples() {
        let s = square_torus();
        let t = complete_to_triangulation(&s, &[]).unwrap();
        assert_eq!(t.euler_counts().e, 3);
        assert!((t.area() - 1.0).abs() < 1e-12);

        let s3 = three_square();
        let t3 = complete_to_triangulation(&s3, &[]).unwrap();
        assert_eq!(t3.euler_counts(), s3.euler_counts());

        let slit = slit_tori(0.5).unwrap();
        let seed: Vec<_> = enumerate_saddle_connections(&slit, 0.6)
            .unwrap()
            .into_iter()
            .filter(|c| c.holonomy.approx_eq(Vec2::new(0.0, 0.5), 1e-9))
            .take(1)
            .collect();
        let t = complete_to_triangulation(&slit, &seed).unwrap();
        assert_eq!(t.euler_counts().e, 12);
        assert!(t.triangles().iter().any(|tr| tr.edges.iter().any(|e| e.approx_eq(Vec2::new(0.0, 0.5), 1e-9))));
        assert!((t.area() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn completion_rejects_crossing_seeds() {
        let s = square_torus();
        let c = enumerate_saddle_connections(&s, 1.5).unwrap();
        let d1 = c.iter().find(|w| w.holonomy.approx_eq(Vec2::new(1.0, 1.0), 1e-9)).unwrap().clone();
        let d2 = c.iter().find(|w| w.holonomy.approx_eq(Vec2::new(1.0, -1.0), 1e-9)).unwrap().clone();
        assert_eq!(complete_to_triangulation(&s, &[d1, d2]).unwrap_err(), TriangulateError::CrossingSeeds(0, 1));
    }
}

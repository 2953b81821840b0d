use flatsurf::builders::{square_torus, three_square};
use flatsurf::flow::{trace, FlowPoint, Iet, Termination};
use flatsurf::modular::{lattice_reduce, unreduce};
use flatsurf::saddle::direction_interval;
use flatsurf::surface::{validate, SurfaceData};
use flatsurf::{Mat2, Triangle, Vec2};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn sl2() -> impl Strategy<Value = Mat2> {
    (-1.5f64..1.5, -2.0f64..2.0, 0.0..TAU)
        .prop_map(|(t, s, r)| Mat2::geodesic(t) * Mat2::horocycle(s) * Mat2::rotation(r))
}

fn edge_vectors(s: &flatsurf::Surface) -> Vec<Vec2> {
    s.triangles().iter().flat_map(|t| t.edges).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_action_round_trips(m in sl2()) {
        let s = three_square();
        let back = s.apply_matrix(&m).unwrap().apply_matrix(&m.inverse().unwrap()).unwrap();
        for (a, b) in edge_vectors(&s).iter().zip(edge_vectors(&back)) {
            prop_assert!(a.approx_eq(b, 1e-9));
        }
    }

    #[test]
    fn matrix_action_is_a_left_action(a in sl2(), b in sl2()) {
        let s = square_torus();
        let two_step = s.apply_matrix(&a).unwrap().apply_matrix(&b).unwrap();
        let one_step = s.apply_matrix(&(b * a)).unwrap();
        for (x, y) in edge_vectors(&two_step).iter().zip(edge_vectors(&one_step)) {
            prop_assert!(x.approx_eq(y, 1e-8 * (1.0 + x.norm())));
        }
    }

    #[test]
    fn rotations_preserve_lengths_and_area(r in 0.0..TAU) {
        let s = three_square();
        let rs = s.apply_matrix(&Mat2::rotation(r)).unwrap();
        prop_assert!((rs.area() - s.area()).abs() < 1e-12);
        for (a, b) in edge_vectors(&s).iter().zip(edge_vectors(&rs)) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn validate_is_total(
        coords in prop::collection::vec(-3.0f64..3.0, 0..24),
        glue in prop::collection::vec((0usize..5, 0usize..4, 0usize..5, 0usize..4), 0..10),
    ) {
        let triangles = coords
            .chunks_exact(6)
            .map(|c| Triangle::new(Vec2::new(c[0], c[1]), Vec2::new(c[2], c[3]), Vec2::new(c[4], c[5])))
            .collect();
        let gluings = glue.into_iter().map(|(a, b, c, d)| [(a, b), (c, d)]).collect();
        let report = validate(&SurfaceData { name: None, triangles, gluings });
        prop_assert_eq!(report.ok, report.errors.is_empty());
    }

    #[test]
    fn direction_interval_matches_sampling(x in -3.0f64..3.0, y in -3.0f64..3.0, t in -2.0f64..2.0, eps in 0.05f64..2.0) {
        let v = Vec2::new(x, y);
        prop_assume!(v.norm() > 0.1);
        let arcs = direction_interval(v, t, eps);
        let n = 720;
        let mut inside = 0;
        for k in 0..n {
            let theta = TAU * (k as f64 + 0.5) / n as f64;
            let w = Mat2::geodesic(t).apply(Mat2::rotation(theta).apply(v));
            let in_set = w.norm() <= eps;
            // skip samples on the boundary where rounding decides
            if (w.norm() - eps).abs() > 1e-9 {
                prop_assert_eq!(arcs.contains(theta), in_set, "θ = {}", theta);
            }
            inside += in_set as usize;
        }
        let measured = TAU * inside as f64 / n as f64;
        prop_assert!((measured - arcs.total_length()).abs() <= 4.0 * TAU / n as f64 + 1e-12);
    }

    #[test]
    fn iet_preserves_measure(
        lengths in prop::collection::vec(0.01f64..1.0, 1..7),
        seed in any::<u64>(),
    ) {
        let n = lengths.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let t = Iet::new(lengths.clone(), perm).unwrap();
        let total = t.total();
        // image intervals tile [0, total) with the same length multiset
        let mut image: Vec<(f64, f64)> = (0..n).map(|i| (t.starts()[i] + t.shifts()[i], lengths[i])).collect();
        image.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut end = 0.0;
        for (a, l) in &image {
            prop_assert!((a - end).abs() < 1e-9);
            end = a + l;
        }
        prop_assert!((end - total).abs() < 1e-9);
        let inv = t.inverse();
        for k in 0..20 {
            let x = total * (k as f64 + 0.5) / 20.0;
            prop_assert!((inv.apply(t.apply(x).unwrap()).unwrap() - x).abs() < 1e-9);
        }
        let gaps = t.min_gap_series(30);
        for w in gaps.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for k in [1, 5, 30] {
            let cells = t.power_partition(k).len();
            prop_assert!(cells as f64 * t.min_gap(k) <= total + 1e-9);
        }
    }

    #[test]
    fn lattice_reduction_round_trips(a in 0.2f64..3.0, b in -20.0f64..20.0, c in 0.2f64..3.0, r in 0.0..TAU) {
        let m = Mat2::rotation(r);
        let (e1, e2) = (m.apply(Vec2::new(a, 0.0)), m.apply(Vec2::new(b, c)));
        let red = lattice_reduce(e1, e2).unwrap();
        let p = &red.point;
        prop_assert!(p.re.abs() <= 0.5 + 1e-9);
        prop_assert!(p.re * p.re + p.im * p.im >= 1.0 - 1e-9);
        let (x, y) = unreduce(red.e1, red.e2, &p.word);
        prop_assert!(x.approx_eq(e1, 1e-9 * (1.0 + b.abs())) && y.approx_eq(e2, 1e-9 * (1.0 + b.abs())));
    }

    #[test]
    fn trajectories_concatenate(theta in 0.1f64..(PI - 0.1), t1 in 0.5f64..5.0, t2 in 0.5f64..5.0) {
        let s = square_torus();
        let start = FlowPoint::new(0, Vec2::new(0.61, 0.27));
        let whole = trace(&s, start, theta, t1 + t2).unwrap();
        prop_assume!(whole.termination == Termination::TimeExpired);
        let first = trace(&s, start, theta, t1).unwrap();
        prop_assume!(first.termination == Termination::TimeExpired);
        let rest = trace(&s, first.end, theta, t2).unwrap();
        prop_assume!(rest.termination == Termination::TimeExpired);
        prop_assert_eq!(whole.end.triangle, rest.end.triangle);
        prop_assert!(whole.end.position.approx_eq(rest.end.position, 1e-9));
        prop_assert!((first.total_length + rest.total_length - whole.total_length).abs() < 1e-9);
        let joined: usize = first.segments.len() + rest.segments.len();
        prop_assert!(joined == whole.segments.len() || joined == whole.segments.len() + 1);
    }
}

//! Property tests for the group model and the geodesic flow.

use heis::geodesic::{geodesic_state, GeodesicSpec};
use heis::group::{
    coord_to_frame, dilate, frame_to_coord, group_inv, group_mul, j_rotate,
    translate_pushforward, Dimension, FrameVector, Point,
};
use proptest::prelude::*;

fn point_strategy(n: usize) -> impl Strategy<Value = Point> {
    (
        prop::collection::vec(-3.0..3.0f64, 2 * n),
        -3.0..3.0f64,
    )
        .prop_map(|(z, t)| Point::new(z, t))
}

fn frame_strategy(n: usize) -> impl Strategy<Value = FrameVector> {
    (
        prop::collection::vec(-2.0..2.0f64, 2 * n),
        -2.0..2.0f64,
    )
        .prop_map(|(a, c)| FrameVector::new(a, c))
}

fn unit_velocity(n: usize) -> impl Strategy<Value = FrameVector> {
    prop::collection::vec(-1.0..1.0f64, 2 * n).prop_filter_map("direction too small", |a| {
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.1 {
            Some(FrameVector::horizontal(
                a.into_iter().map(|v| v / norm).collect(),
            ))
        } else {
            None
        }
    })
}

fn max_coord_diff(p: &Point, q: &Point) -> f64 {
    p.z()
        .iter()
        .zip(q.z())
        .map(|(a, b)| (a - b).abs())
        .fold((p.t() - q.t()).abs(), f64::max)
}

proptest! {
    #[test]
    fn group_product_is_associative(
        p in point_strategy(2),
        q in point_strategy(2),
        r in point_strategy(2),
    ) {
        let left = group_mul(&group_mul(&p, &q), &r);
        let right = group_mul(&p, &group_mul(&q, &r));
        prop_assert!(max_coord_diff(&left, &right) <= 1e-12);
    }

    #[test]
    fn double_inversion_is_identity(p in point_strategy(3)) {
        let back = group_inv(&group_inv(&p));
        prop_assert!(max_coord_diff(&p, &back) == 0.0);
    }

    #[test]
    fn dilation_is_a_homomorphism(
        p in point_strategy(2),
        q in point_strategy(2),
        s in 0.1..4.0f64,
    ) {
        let a = dilate(s, &group_mul(&p, &q)).unwrap();
        let b = group_mul(&dilate(s, &p).unwrap(), &dilate(s, &q).unwrap());
        prop_assert!(max_coord_diff(&a, &b) <= 1e-12);
    }

    #[test]
    fn j_is_an_isometry_on_horizontal_vectors(v in unit_velocity(3)) {
        let jv = j_rotate(&v);
        prop_assert!((jv.norm() - v.norm()).abs() <= 1e-15);
        // and J^2 = -1 on the horizontal distribution
        let jjv = j_rotate(&jv);
        for (a, b) in jjv.a().iter().zip(v.a()) {
            prop_assert!((a + b).abs() <= 1e-15);
        }
    }

    #[test]
    fn frame_coordinate_round_trip(p in point_strategy(2), v in frame_strategy(2)) {
        let w = frame_to_coord(&p, &v);
        let back = coord_to_frame(&p, &w);
        for (a, b) in back.a().iter().zip(v.a()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!((back.c() - v.c()).abs() <= 1e-12);
    }

    #[test]
    fn left_translation_preserves_frame_coefficients(
        p in point_strategy(2),
        q in point_strategy(2),
        v in frame_strategy(2),
    ) {
        // push a tangent vector at q forward by L_p and re-read it on the
        // frame at p * q: the coefficients must be unchanged
        let w = frame_to_coord(&q, &v);
        let pushed = translate_pushforward(&p, &w);
        let at_pq = coord_to_frame(&group_mul(&p, &q), &pushed);
        for (a, b) in at_pq.a().iter().zip(v.a()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!((at_pq.c() - v.c()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geodesics_are_horizontal_unit_speed(
        v0 in unit_velocity(2),
        p0 in point_strategy(2),
        lambda in -2.0..2.0f64,
        s in 0.0..3.0f64,
    ) {
        let g = GeodesicSpec::new(lambda, p0, v0).unwrap();
        let st = geodesic_state(&g, s);
        prop_assert!(st.velocity.c().abs() <= 1e-10);
        prop_assert!((st.velocity.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn geodesics_are_left_invariant(
        v0 in unit_velocity(1),
        p0 in point_strategy(1),
        lambda in -2.0..2.0f64,
        s in 0.0..3.0f64,
    ) {
        let dim = Dimension::new(1).unwrap();
        let from_p0 = GeodesicSpec::new(lambda, p0.clone(), v0.clone()).unwrap();
        let from_origin = GeodesicSpec::new(lambda, Point::origin(dim), v0).unwrap();
        let a = geodesic_state(&from_p0, s).point;
        let b = group_mul(&p0, &geodesic_state(&from_origin, s).point);
        prop_assert!(max_coord_diff(&a, &b) <= 1e-10);
    }

    #[test]
    fn axis_starts_have_sinusoidal_horizontal_radius(
        v0 in unit_velocity(2),
        t0 in -2.0..2.0f64,
        lambda in 0.2..2.0f64,
        frac in 0.01..0.99f64,
    ) {
        let dim = Dimension::new(2).unwrap();
        let g = GeodesicSpec::new(lambda, Point::on_axis(dim, t0), v0).unwrap();
        let s = frac * std::f64::consts::PI / lambda;
        let st = geodesic_state(&g, s);
        prop_assert!((st.point.z_norm() - (lambda * s).sin() / lambda).abs() <= 1e-10);
    }
}

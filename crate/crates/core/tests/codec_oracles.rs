mod common;

use std::f64::consts::TAU;

use polarmask::codec::{
    decode, densify, encode, round_trip_iou, upper_bound_sweep, CenterMode, PolarMask,
};
use polarmask::geometry::{mask_iou, mass_center, rasterize, Point2, Polygon};
use polarmask::io::synth::{synth_corpus, SynthKind};

#[test]
fn star_rays_match_brute_force() {
    let mut rng = common::rng(10);
    for _ in 0..100 {
        let star = common::random_star(&mut rng, 30, (200.0, 200.0), (20.0, 80.0));
        let c = mass_center(&star).unwrap();
        let pm = encode(&star, c, 36).unwrap();
        for (i, &r) in pm.rays().iter().enumerate() {
            let oracle = common::brute_force_ray(&star, c, i as f64 * TAU / 36.0).unwrap();
            assert!((r - oracle).abs() <= 0.5, "ray {i}: {r} vs {oracle}");
        }
    }
}

#[test]
fn five_point_star_concave_rule() {
    let vertices: Vec<Point2<f64>> = (0..10)
        .map(|i| {
            let t = i as f64 * TAU / 10.0 + 0.1;
            let r = if i % 2 == 0 { 50.0 } else { 20.0 };
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    let star = Polygon::new(vertices).unwrap();
    let c = mass_center(&star).unwrap();
    let pm = encode(&star, c, 36).unwrap();
    for (i, &r) in pm.rays().iter().enumerate() {
        let oracle = common::brute_force_ray(&star, c, i as f64 * TAU / 36.0).unwrap();
        assert!((r - oracle).abs() <= 0.5);
    }
}

#[test]
fn rays_missing_by_more_than_an_eighth_get_epsilon() {
    // thin sliver far to the right of the center: only rays near 0° hit it
    let sliver =
        Polygon::from_xy(&[(100.0, -5.0), (101.0, -5.0), (101.0, 5.0), (100.0, 5.0)]).unwrap();
    let pm = encode(&sliver, Point2::new(0.0, 0.0), 72).unwrap();
    let hit: Vec<bool> = (0..72)
        .map(|i| {
            common::brute_force_ray(&sliver, Point2::new(0.0, 0.0), i as f64 * TAU / 72.0).is_some()
        })
        .collect();
    for i in 0..72 {
        let near_hit = (0..=9).any(|off| hit[(i + off) % 72] || hit[(i + 72 - off) % 72]);
        if !near_hit {
            assert_eq!(pm.rays()[i], 1e-6, "ray {i}");
        } else {
            assert!(pm.rays()[i] > 99.0, "ray {i}");
        }
    }
}

#[test]
fn densify_keeps_area() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let p = common::random_simple(&mut rng, 10, (0.0, 0.0), (5.0, 40.0));
        let d = densify(&p, 0.5).unwrap();
        assert!((d.area() - p.area()).abs() < 1e-9 * p.area().max(1.0));
        assert!(d.edges().all(|(a, b)| a.distance(b) <= 0.5 + 1e-12));
    }
}

#[test]
fn decoded_vertices_lie_on_boundary() {
    let mut rng = common::rng(12);
    for _ in 0..20 {
        let star = common::random_star(&mut rng, 50, (0.0, 0.0), (20.0, 60.0));
        let c = Point2::new(0.0, 0.0);
        let pm = encode(&star, c, 72).unwrap();
        for q in decode(&pm).vertices() {
            let dist = star
                .edges()
                .map(|(a, b)| segment_distance(*q, a, b))
                .fold(f64::INFINITY, f64::min);
            assert!(dist <= 0.5, "{dist}");
        }
    }
}

fn segment_distance(p: Point2<f64>, a: Point2<f64>, b: Point2<f64>) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

#[test]
fn circle_round_trip_at_512() {
    let circle = common::regular(360, 200.0, (256.0, 256.0));
    let pm = encode(&circle, Point2::new(256.0, 256.0), 72).unwrap();
    let iou = mask_iou(
        &rasterize(&circle, 512, 512).unwrap(),
        &rasterize(&decode(&pm), 512, 512).unwrap(),
    )
    .unwrap();
    assert!(iou >= 0.99, "{iou}");
}

#[test]
fn convex_fidelity_non_decreasing_in_n() {
    let corpus = synth_corpus(SynthKind::Convex, 100, 13);
    let rows = upper_bound_sweep(&corpus, &[18, 24, 36, 72, 120], CenterMode::Mass, 256).unwrap();
    for w in rows.windows(2) {
        assert!(w[0].mean_iou <= w[1].mean_iou, "{rows:?}");
    }
}

#[test]
fn circles_reach_097_at_36() {
    let corpus = synth_corpus(SynthKind::Circles, 50, 14);
    let rows = upper_bound_sweep(&corpus, &[36], CenterMode::Mass, 256).unwrap();
    assert!(rows[0].mean_iou >= 0.97);
    assert_eq!(rows[0].instance_count, 50);
}

#[test]
fn crescents_prefer_mass_center() {
    let corpus = synth_corpus(SynthKind::Crescents, 50, 15);
    let mass = upper_bound_sweep(&corpus, &[36], CenterMode::Mass, 256).unwrap();
    let boxed = upper_bound_sweep(&corpus, &[36], CenterMode::Box, 256).unwrap();
    assert!(mass[0].mean_iou >= boxed[0].mean_iou);
}

#[test]
fn every_encoded_ray_is_at_least_epsilon() {
    for poly in synth_corpus(SynthKind::Crescents, 20, 16) {
        for center in [Point2::new(0.0, 0.0), mass_center(&poly).unwrap()] {
            let pm = encode(&poly, center, 36).unwrap();
            assert!(pm.rays().iter().all(|&r| r >= 1e-6));
        }
    }
}

#[test]
fn round_trip_of_exact_polar_shape_is_near_one() {
    let rays: Vec<f64> = (0..36)
        .map(|i| 30.0 + 10.0 * (i as f64 * 0.7).sin())
        .collect();
    let pm = PolarMask::new(Point2::new(100.0, 100.0), rays).unwrap();
    let shape = decode(&pm);
    let iou = round_trip_iou(&shape, pm.center(), 36, 256).unwrap();
    assert!(iou > 0.999, "{iou}");
}

use proptest::prelude::*;
use rconvex::geom::{circular_segment_area, ChordRegion, ChordSide, Region, RigidMotion, Rotation, Sector};
use rconvex::hull::brute_hull;
use rconvex::metrics::fit_rate;
use rconvex::oracles::{chord_area_quadrature, family_far};
use rconvex::{Point2, PointCloud, RHull, UnitVec};

fn cloud_strategy() -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| Point2::new(x, y)), 3..40)
}

fn probes(seed: u64, count: usize) -> Vec<Point2> {
    let mut s = seed;
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64 * 3.0 - 1.5
    };
    (0..count).map(|_| Point2::new(next(), next())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_lie_in_their_hull(pts in cloud_strategy(), r in 0.05f64..2.0) {
        let hull = RHull::new(PointCloud::new(pts.clone()).unwrap(), r).unwrap();
        for p in pts {
            prop_assert!(hull.contains(p));
        }
    }

    #[test]
    fn exact_agrees_with_brute_force(pts in cloud_strategy(), r in 0.1f64..1.5, seed in any::<u64>()) {
        let cloud = PointCloud::new(pts).unwrap();
        let hull = RHull::new(cloud.clone(), r).unwrap();
        let brute = brute_hull(&cloud, r).unwrap();
        let boundary = hull.boundary();
        for p in probes(seed, 200) {
            if boundary.distance(p, cloud.points()) < 1e-7 {
                continue;
            }
            prop_assert_eq!(hull.contains(p), brute.contains(p), "probe {:?}", p);
        }
    }

    #[test]
    fn quarter_turns_and_dyadic_shifts_commute(pts in cloud_strategy(), r in 0.1f64..1.5, seed in any::<u64>()) {
        let turn = |p: Point2| Point2::new(-p.y + 0.5, p.x - 0.25);
        let cloud = PointCloud::new(pts.clone()).unwrap();
        let hull = RHull::new(cloud.clone(), r).unwrap();
        let moved = RHull::new(PointCloud::new(pts.iter().map(|&p| turn(p)).collect()).unwrap(), r).unwrap();
        let boundary = hull.boundary();
        for p in probes(seed, 200) {
            if boundary.distance(p, cloud.points()) < 1e-7 {
                continue;
            }
            prop_assert_eq!(hull.contains(p), moved.contains(turn(p)));
        }
        let mut a = hull.extreme_indices();
        let mut b = moved.extreme_indices();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn family_margin_is_motion_invariant(
        theta in 0.0f64..std::f64::consts::TAU,
        tx in -5.0f64..5.0,
        ty in -5.0f64..5.0,
        r in 0.05f64..2.0,
        u in 0.0f64..1.0,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let fam = family_far(Point2::new(0.3, -0.2), r).unwrap();
        let t = RigidMotion::from_rotation(Rotation::new(theta), Point2::new(tx, ty));
        let moved = fam.transformed(&t);
        let y = fam.anchor + UnitVec::from_angle(phi).vec() * (r * u.sqrt());
        prop_assert!((fam.margin(y) - moved.margin(t.apply(y))).abs() <= 1e-9 * (1.0 + r));
        prop_assert!(fam.margin(y) >= -1e-12 * r);
    }

    #[test]
    fn sector_farthest_distance_bounds_samples(
        half in 0.05f64..1.5,
        radius in 0.1f64..3.0,
        dir in 0.0f64..std::f64::consts::TAU,
        yx in -4.0f64..4.0,
        yy in -4.0f64..4.0,
        seed in any::<u64>(),
    ) {
        let s = Region::Sector(Sector::new(Point2::new(0.2, 0.1), UnitVec::from_angle(dir), half, radius).unwrap());
        let y = Point2::new(yx, yy);
        let far = s.farthest_distance(y);
        for p in s.sample_points(200, seed) {
            prop_assert!(p.dist(y) <= far * (1.0 + 1e-12));
        }
    }

    #[test]
    fn chord_area_matches_quadrature(r in 0.01f64..5.0, frac in 0.001f64..1.0) {
        let h = r * frac;
        let exact = circular_segment_area(r, h);
        prop_assert!((exact - chord_area_quadrature(r, h)).abs() <= 1e-8 * exact);
        let half = ChordRegion::new(r, h, ChordSide::RightHalf).unwrap().area();
        prop_assert!((2.0 * half - exact).abs() <= 1e-12 * exact.max(1e-300));
    }

    #[test]
    fn raster_covers_its_samples(pts in cloud_strategy(), r in 0.1f64..1.0) {
        let hull = RHull::new(PointCloud::new(pts.clone()).unwrap(), r).unwrap();
        let mask = hull.rasterize(r / 20.0).unwrap();
        for p in pts {
            prop_assert!(mask.contains(p));
        }
    }

    #[test]
    fn rate_fit_recovers_power_laws(c in 0.1f64..10.0, gamma in -1.5f64..1.5) {
        let ns = [100usize, 200, 400, 800, 1600, 3200];
        let means: Vec<f64> = ns.iter().map(|&n| c * (n as f64).powf(gamma)).collect();
        let fit = fit_rate(&ns, &means).unwrap();
        prop_assert!((fit.slope - gamma).abs() < 1e-9);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-8);
    }
}

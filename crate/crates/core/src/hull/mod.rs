//! The r-convex hull `C_r(X) = (X ⊕ rB) ⊖ rB` of a finite sample.

mod arcs;
mod brute;
mod buckets;
mod delaunay;
mod membership;
mod raster;

pub use arcs::{Arc, ArcBoundary, BoundaryLoop};
pub use brute::BruteHull;
pub use delaunay::{Edge, Triangulation};
pub use raster::{closing_grid, RasterMask, MAX_CELLS};

use crate::error::{domain, precondition, Result};
use crate::geom::{Aabb, Point2};
use membership::{ExactEngine, TIE_TOL};

/// An ordered, non-empty list of finite sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Point2>,
}

impl PointCloud {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return precondition("point cloud must contain at least one point");
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return precondition(format!("point {i} is not finite"));
        }
        Ok(PointCloud { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::around_points(&self.points).unwrap()
    }

    pub fn has_duplicates(&self) -> bool {
        let mut sorted = self.points.clone();
        sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

/// Whether the excluding balls are taken open or closed. The two closings
/// differ only on null sets, such as the circumcenter of an equilateral
/// triangle whose circumradius equals `r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Semantics {
    #[default]
    Closed,
    Open,
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed" => Ok(Semantics::Closed),
            "open" => Ok(Semantics::Open),
            _ => Err(format!("unknown semantics `{s}` (expected open or closed)")),
        }
    }
}

/// A sample point on the hull boundary with the center of an empty disk of
/// radius `r` touching it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremePoint {
    pub index: usize,
    pub witness: Point2,
}

#[derive(Clone, Debug)]
enum Engine {
    Exact(ExactEngine),
    Brute(BruteHull),
}

/// The estimator `S_n` for a cloud and radius.
#[derive(Clone, Debug)]
pub struct RHull {
    cloud: PointCloud,
    r: f64,
    semantics: Semantics,
    tri: Triangulation,
    engine: Engine,
}

impl RHull {
    pub fn new(cloud: PointCloud, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return domain(format!("radius {r} must be positive and finite"));
        }
        let tri = Triangulation::new(cloud.points());
        let engine = if tri.is_degenerate() {
            Engine::Brute(BruteHull::build(tri.points(), r))
        } else {
            Engine::Exact(ExactEngine::new(&tri, r))
        };
        Ok(RHull { cloud, r, semantics: Semantics::Closed, tri, engine })
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// True when the cloud is collinear or has fewer than three distinct
    /// points; the closing is then the sample itself.
    pub fn is_degenerate(&self) -> bool {
        self.tri.is_degenerate()
    }

    pub fn contains(&self, x: Point2) -> bool {
        match &self.engine {
            Engine::Exact(e) => e.contains(x, self.semantics),
            Engine::Brute(b) => b.contains(x),
        }
    }

    /// Sample points lying on the boundary of the hull, in cloud order.
    pub fn extreme_points(&self) -> Vec<ExtremePoint> {
        let pts = self.tri.points();
        match &self.engine {
            Engine::Exact(e) => {
                let lo = self.r * (1.0 - TIE_TOL);
                let (reach, far) = (e.reach(), e.farthest());
                self.tri
                    .vertex_of()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| reach[v as usize] >= lo)
                    .map(|(index, &v)| {
                        let p = pts[v as usize];
                        let dir = (far[v as usize] - p) * (1.0 / reach[v as usize]);
                        ExtremePoint { index, witness: p + dir * self.r }
                    })
                    .collect()
            }
            Engine::Brute(_) => {
                let line = if pts.len() > 1 { pts[pts.len() - 1] - pts[0] } else { Point2::new(1.0, 0.0) };
                let normal = line.perp() * (1.0 / line.norm());
                self.cloud
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(index, &p)| ExtremePoint { index, witness: p + normal * self.r })
                    .collect()
            }
        }
    }

    pub fn extreme_indices(&self) -> Vec<usize> {
        self.extreme_points().into_iter().map(|e| e.index).collect()
    }

    pub fn boundary(&self) -> ArcBoundary {
        match &self.engine {
            Engine::Exact(e) => arcs::build(&self.tri, e, self.r),
            Engine::Brute(_) => ArcBoundary { isolated: (0..self.cloud.len()).collect(), ..Default::default() },
        }
    }

    /// Hull area from the arc boundary.
    pub fn area(&self) -> f64 {
        self.boundary().area()
    }

    /// Raster oracle for the same cloud and radius.
    pub fn rasterize(&self, cell_size: f64) -> Result<RasterMask> {
        closing_grid(self.cloud.points(), self.r, cell_size)
    }
}

pub fn membership(cloud: &PointCloud, r: f64, x: Point2) -> Result<bool> {
    Ok(RHull::new(cloud.clone(), r)?.contains(x))
}

pub fn extreme_points(cloud: &PointCloud, r: f64) -> Result<Vec<usize>> {
    Ok(RHull::new(cloud.clone(), r)?.extreme_indices())
}

pub fn boundary_arcs(cloud: &PointCloud, r: f64) -> Result<ArcBoundary> {
    Ok(RHull::new(cloud.clone(), r)?.boundary())
}

/// Brute-force membership oracle built straight from the covering definition.
pub fn brute_hull(cloud: &PointCloud, r: f64) -> Result<BruteHull> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius {r} must be positive and finite"));
    }
    Ok(BruteHull::build(cloud.points(), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(pts: &[(f64, f64)]) -> PointCloud {
        PointCloud::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn disk_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        while pts.len() < n {
            let p = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if p.norm() <= 1.0 {
                pts.push(p);
            }
        }
        PointCloud::new(pts).unwrap()
    }

    fn triangle() -> (PointCloud, Point2, f64) {
        let s3 = 3f64.sqrt();
        (cloud(&[(0.0, 0.0), (1.0, 0.0), (0.5, s3 / 2.0)]), Point2::new(0.5, s3 / 6.0), 1.0 / s3)
    }

    #[test]
    fn empty_and_bad_inputs() {
        assert!(PointCloud::new(vec![]).is_err());
        assert!(PointCloud::new(vec![Point2::new(f64::NAN, 0.0)]).is_err());
        let c = cloud(&[(0.0, 0.0)]);
        assert!(RHull::new(c.clone(), 0.0).is_err());
        assert!(RHull::new(c, -1.0).is_err());
    }

    #[test]
    fn equilateral_tie_at_circumradius() {
        let (c, center, r) = triangle();
        let closed = RHull::new(c.clone(), r).unwrap();
        assert!(closed.contains(center));
        let open = closed.clone().with_semantics(Semantics::Open);
        assert!(!open.contains(center));
        assert!(c.points().iter().all(|&p| open.contains(p) && closed.contains(p)));
        assert!(brute_hull(&c, r).unwrap().contains(center));
        let b = closed.boundary();
        assert!(b.arcs.is_empty(), "{:#?}", b.arcs);
        assert_eq!(b.isolated, vec![0, 1, 2]);
        assert_eq!(b.area(), 0.0);
    }

    #[test]
    fn two_points_far_apart() {
        let c = cloud(&[(0.0, 0.0), (4.0, 0.0)]);
        let h = RHull::new(c, 1.0).unwrap();
        assert!(h.is_degenerate());
        assert!(!h.contains(Point2::new(2.0, 0.0)));
        assert!(h.contains(Point2::new(4.0, 0.0)));
    }

    #[test]
    fn two_close_points_close_to_themselves() {
        let c = cloud(&[(0.0, 0.0), (1.0, 0.0)]);
        let h = RHull::new(c, 1.0).unwrap();
        assert!(!h.contains(Point2::new(0.5, 0.0)));
        let b = h.boundary();
        assert!(b.arcs.is_empty());
        assert_eq!(b.isolated, vec![0, 1]);
        assert_eq!(h.extreme_indices(), vec![0, 1]);
    }

    #[test]
    fn sparse_triangle_small_r() {
        let s3 = 3f64.sqrt();
        let c = cloud(&[(0.0, 0.0), (1.0, 0.0), (0.5, s3 / 2.0)]);
        let h = RHull::new(c, 0.1).unwrap();
        assert_eq!(h.extreme_indices(), vec![0, 1, 2]);
        assert_eq!(h.area(), 0.0);
    }

    #[test]
    fn samples_are_members_and_extremes_have_witnesses() {
        let c = disk_cloud(600, 4);
        let h = RHull::new(c.clone(), 0.3).unwrap();
        assert!(c.points().iter().all(|&p| h.contains(p)));
        let ext = h.extreme_points();
        assert!(!ext.is_empty() && ext.len() < c.len());
        for e in &ext {
            let p = c.points()[e.index];
            assert!((e.witness.dist(p) - 0.3).abs() < 1e-9);
            let nearest = c.points().iter().map(|q| q.dist(e.witness)).fold(f64::INFINITY, f64::min);
            assert!(nearest >= 0.3 - 1e-9);
            assert!(1.0 - p.norm() < 0.3);
        }
    }

    #[test]
    fn large_radius_leaves_convex_hull_vertices() {
        let c = disk_cloud(200, 9);
        let h = RHull::new(c.clone(), 1e4).unwrap();
        let mut hull: Vec<usize> = h.triangulation().hull().iter().map(|&v| h.triangulation().first_index()[v as usize]).collect();
        hull.sort_unstable();
        assert_eq!(h.extreme_indices(), hull);
    }

    #[test]
    fn exact_agrees_with_brute() {
        let c = disk_cloud(150, 21);
        let r = 0.35;
        let h = RHull::new(c.clone(), r).unwrap();
        let b = brute_hull(&c, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4000 {
            let x = Point2::new(rng.gen_range(-1.1..1.1), rng.gen_range(-1.1..1.1));
            assert_eq!(h.contains(x), b.contains(x), "{x:?}");
        }
    }

    #[test]
    fn dense_disk_boundary() {
        let c = disk_cloud(3000, 8);
        let h = RHull::new(c.clone(), 0.5).unwrap();
        let b = h.boundary();
        assert!(!b.arcs.is_empty());
        let outer: Vec<_> = b.loops.iter().filter(|l| l.turning > 0.0).collect();
        assert_eq!(outer.len(), 1);
        assert!(b.loops.iter().all(|l| l.closed));
        assert!((outer[0].turning - std::f64::consts::TAU).abs() < 1e-6);
        let area = b.area();
        assert!((area - std::f64::consts::PI).abs() < 0.05 * std::f64::consts::PI, "{area}");
        for p in b.sample_points(20) {
            assert!(h.contains(p));
        }
    }

    #[test]
    fn boundary_separates_inside_from_outside() {
        let c = disk_cloud(120, 33);
        let r = 0.4;
        let h = RHull::new(c, r).unwrap();
        let b = h.boundary();
        for a in &b.arcs {
            for k in 1..10 {
                let t = k as f64 / 10.0;
                let p = a.point_at(t);
                let out = (a.center - p) * (1e-6 / r);
                assert!(h.contains(p - out), "inside side of arc");
                assert!(!h.contains(p + out), "outside side of arc");
            }
        }
    }
}

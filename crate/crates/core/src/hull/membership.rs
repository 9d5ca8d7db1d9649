//! Exact membership in the closing via Voronoi cells.
//!
//! `x` is excluded iff `max_{y in B̄(x,r)} d(y, X) > r`. Inside the cell of
//! site `p` the distance is `|y - p|`, so the maximum over the disk is attained
//! at a cell vertex inside the disk, at an edge/circle crossing, or at the
//! antipode `x + r (x - p)/|x - p|`. Only cells reaching farther than `r`
//! from their site can exceed the threshold.

use super::buckets::Buckets;
use super::delaunay::Triangulation;
use super::Semantics;
use crate::geom::{Aabb, Point2};

pub(crate) const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub(crate) struct Cell {
    pub poly: Vec<Point2>,
    pub reach: f64,
    pub far: Point2,
}

/// Clips `frame` by the bisector half-planes of `p` against each neighbour.
pub(crate) fn voronoi_cell(p: Point2, neighbors: impl Iterator<Item = Point2>, frame: Aabb) -> Cell {
    let mut poly = vec![
        frame.min,
        Point2::new(frame.max.x, frame.min.y),
        frame.max,
        Point2::new(frame.min.x, frame.max.y),
    ];
    let mut next = Vec::with_capacity(12);
    for q in neighbors {
        let n = q - p;
        let m = (p + q) * 0.5;
        let off = m.dot(n);
        next.clear();
        for k in 0..poly.len() {
            let a = poly[k];
            let b = poly[(k + 1) % poly.len()];
            let fa = a.dot(n) - off;
            let fb = b.dot(n) - off;
            if fa <= 0.0 {
                next.push(a);
            }
            if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                let t = fa / (fa - fb);
                next.push(a + (b - a) * t);
            }
        }
        std::mem::swap(&mut poly, &mut next);
    }
    let (mut reach, mut far) = (0.0, p);
    for &v in &poly {
        let d = v.dist(p);
        if d > reach {
            reach = d;
            far = v;
        }
    }
    Cell { poly, reach, far }
}

#[derive(Clone, Debug)]
struct BadCell {
    site: Point2,
    poly: Vec<Point2>,
    bbox: Aabb,
}

/// Membership oracle built once per cloud and radius; immutable afterwards.
#[derive(Clone, Debug)]
pub(crate) struct ExactEngine {
    r: f64,
    hull_box: Aabb,
    reach: Vec<f64>,
    far: Vec<Point2>,
    bad: Vec<BadCell>,
    index: Buckets,
}

impl ExactEngine {
    pub fn new(tri: &Triangulation, r: f64) -> Self {
        let pts = tri.points();
        let hull_box = Aabb::around_points(pts).unwrap();
        let span = hull_box.width().max(hull_box.height());
        let frame = hull_box.inflate(3.0 * r + span + 1.0);
        let lo = r * (1.0 - TIE_TOL);
        let mut reach = Vec::with_capacity(pts.len());
        let mut far = Vec::with_capacity(pts.len());
        let mut bad = Vec::new();
        for (v, &p) in pts.iter().enumerate() {
            let cell = voronoi_cell(p, tri.neighbors(v as u32).iter().map(|&w| pts[w as usize]), frame);
            reach.push(cell.reach);
            far.push(cell.far);
            if cell.reach >= lo {
                let bbox = Aabb::around_points(&cell.poly).unwrap();
                bad.push(BadCell { site: p, poly: cell.poly, bbox });
            }
        }
        let domain = hull_box.inflate(r);
        let index = Buckets::build(
            domain,
            r,
            256,
            bad.iter().enumerate().map(|(i, c)| (i as u32, c.bbox.inflate(r))),
        );
        ExactEngine { r, hull_box, reach, far, bad, index }
    }

    /// Farthest distance from each vertex to its (frame-clipped) cell.
    pub fn reach(&self) -> &[f64] {
        &self.reach
    }

    pub fn farthest(&self) -> &[Point2] {
        &self.far
    }

    pub fn contains(&self, x: Point2, semantics: Semantics) -> bool {
        // the closing lies inside the convex hull of the sample
        let eps = 1e-12 * (1.0 + self.hull_box.width().max(self.hull_box.height()));
        if !self.hull_box.inflate(eps).contains(x) {
            return false;
        }
        for &id in self.index.at(x) {
            let cell = &self.bad[id as usize];
            if cell.bbox.distance_to(x) <= self.r && self.excludes(cell, x, semantics) {
                return false;
            }
        }
        true
    }

    fn excludes(&self, cell: &BadCell, x: Point2, semantics: Semantics) -> bool {
        let r = self.r;
        let r2 = r * r;
        let hi = r * (1.0 + TIE_TOL);
        let lo = r * (1.0 - TIE_TOL);
        let p = cell.site;
        let poly = &cell.poly;
        let m = poly.len();
        for k in 0..m {
            let a = poly[k];
            let b = poly[(k + 1) % m];
            let da2 = a.dist2(x);
            if da2 <= r2 {
                let dp = a.dist(p);
                if dp > hi {
                    return true;
                }
                if semantics == Semantics::Open && da2 < lo * lo && dp >= lo {
                    return true;
                }
            }
            // edge a→b against the circle |y - x| = r
            let e = b - a;
            let f = a - x;
            let qa = e.norm2();
            if qa == 0.0 {
                continue;
            }
            let qb = f.dot(e);
            let qc = f.norm2() - r2;
            let disc = qb * qb - qa * qc;
            if disc < 0.0 {
                continue;
            }
            let s = disc.sqrt();
            for t in [(-qb - s) / qa, (-qb + s) / qa] {
                if (0.0..=1.0).contains(&t) && (a + e * t).dist(p) > hi {
                    return true;
                }
            }
        }
        let w = x - p;
        let dw = w.norm();
        if dw > r * TIE_TOL {
            let anti = x + w * (r / dw);
            if point_in_convex(poly, anti) {
                return true;
            }
        }
        false
    }
}

fn point_in_convex(poly: &[Point2], q: Point2) -> bool {
    let m = poly.len();
    (0..m).all(|k| {
        let a = poly[k];
        let b = poly[(k + 1) % m];
        (b - a).cross(q - a) >= -1e-12 * (b - a).norm() * (1.0 + (q - a).norm())
    })
}

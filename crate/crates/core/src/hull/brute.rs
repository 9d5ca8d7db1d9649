//! Definition-level membership oracle, independent of the triangulation.
//!
//! `x` belongs to the closing iff `B̄(x, r) ⊆ ∪ B̄(X_i, r)`. The disk is
//! covered iff its boundary circle is covered and no uncovered vertex of the
//! union (a pairwise circle crossing outside every other disk) lies inside it.

use std::f64::consts::TAU;

use super::buckets::{point_buckets, Buckets};
use super::membership::TIE_TOL;
use crate::geom::{Aabb, Point2};

/// Brute-force closing membership with closed-ball semantics.
#[derive(Clone, Debug)]
pub struct BruteHull {
    points: Vec<Point2>,
    r: f64,
    cover: f64,
    near: Buckets,
    holes: Vec<Point2>,
    hole_index: Option<Buckets>,
}

impl BruteHull {
    pub(crate) fn build(points: &[Point2], r: f64) -> Self {
        let cover = r * (1.0 + TIE_TOL);
        let near = point_buckets(points, 2.0 * cover);
        let mut holes = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            near.visit(Aabb::new(p, p).inflate(2.0 * cover), |j| {
                let j = j as usize;
                if j <= i {
                    return;
                }
                let q = points[j];
                let d = p.dist(q);
                if d == 0.0 || d >= 2.0 * cover {
                    return;
                }
                let m = (p + q) * 0.5;
                let h = (cover * cover - d * d / 4.0).max(0.0).sqrt();
                let n = (q - p).perp() * (1.0 / d);
                for w in [m + n * h, m - n * h] {
                    if !covered_strictly(points, &near, w, cover, i, j) {
                        holes.push(w);
                    }
                }
            });
        }
        let hole_index = (!holes.is_empty()).then(|| point_buckets(&holes, r));
        BruteHull { points: points.to_vec(), r, cover, near, holes, hole_index }
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Crossings of the covering circles that no third disk covers.
    pub fn uncovered_vertices(&self) -> &[Point2] {
        &self.holes
    }

    pub fn contains(&self, x: Point2) -> bool {
        let r = self.r;
        let reach = r + self.cover;
        let mut spans: Vec<(f64, f64)> = Vec::new();
        let mut full = false;
        self.near.visit(Aabb::new(x, x).inflate(reach), |i| {
            if full {
                return;
            }
            let p = self.points[i as usize];
            let d = p.dist(x);
            if d >= reach {
                return;
            }
            if d + r <= self.cover {
                full = true;
                return;
            }
            let c = (r * r + d * d - self.cover * self.cover) / (2.0 * r * d);
            if c >= 1.0 {
                return;
            }
            let w = c.max(-1.0).acos();
            let phi = (p - x).angle().rem_euclid(TAU);
            let (s, e) = (phi - w, phi + w);
            if s < 0.0 {
                spans.push((s + TAU, TAU));
                spans.push((0.0, e));
            } else if e > TAU {
                spans.push((s, TAU));
                spans.push((0.0, e - TAU));
            } else {
                spans.push((s, e));
            }
        });
        if !full {
            spans.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut covered_to = 0.0;
            for &(s, e) in &spans {
                if s > covered_to {
                    return false;
                }
                covered_to = f64::max(covered_to, e);
            }
            if covered_to < TAU {
                return false;
            }
        }
        if let Some(index) = &self.hole_index {
            let mut inside = false;
            index.visit(Aabb::new(x, x).inflate(r), |k| {
                if self.holes[k as usize].dist(x) < r {
                    inside = true;
                }
            });
            if inside {
                return false;
            }
        }
        true
    }
}

fn covered_strictly(points: &[Point2], near: &Buckets, w: Point2, cover: f64, i: usize, j: usize) -> bool {
    let mut hit = false;
    near.visit(Aabb::new(w, w).inflate(cover), |k| {
        let k = k as usize;
        if !hit && k != i && k != j && points[k].dist(w) < cover {
            hit = true;
        }
    });
    hit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_far_points_exclude_midpoint() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)];
        let b = BruteHull::build(&pts, 1.0);
        assert!(!b.contains(Point2::new(2.0, 0.0)));
        assert!(b.contains(pts[0]) && b.contains(pts[1]));
    }

    #[test]
    fn equilateral_circumcenter_is_a_tie_member() {
        let s3 = 3f64.sqrt();
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, s3 / 2.0)];
        let c = Point2::new(0.5, s3 / 6.0);
        let b = BruteHull::build(&pts, 1.0 / s3);
        assert!(b.contains(c));
        assert!(!b.contains(c + Point2::new(0.01, 0.0)));
        assert!(!b.contains(Point2::new(0.5, 0.0)));
    }

    #[test]
    fn ring_of_points_leaves_a_hole() {
        let pts: Vec<Point2> = (0..12)
            .map(|k| Point2::new((k as f64 * TAU / 12.0).cos(), (k as f64 * TAU / 12.0).sin()))
            .collect();
        // radius-0.3 disks only cover a band around the ring
        let b = BruteHull::build(&pts, 0.3);
        assert!(!b.contains(Point2::ORIGIN));
        assert!(!b.uncovered_vertices().is_empty());
        let big = BruteHull::build(&pts, 1.2);
        assert!(big.contains(Point2::ORIGIN));
    }
}

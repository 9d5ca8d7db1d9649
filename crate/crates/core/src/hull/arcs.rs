//! Boundary of the closing as circular arcs of empty radius-`r` disks.
//!
//! Every boundary arc lies on a circle of radius `r` through two Delaunay
//! neighbours whose center has no sample point closer than `r`. Such an arc
//! may be partly swallowed by other empty disks, so candidate arcs are split
//! at their mutual crossings and each piece is kept only if its midpoint
//! still belongs to the closing.

use std::f64::consts::TAU;

use super::buckets::point_buckets;
use super::delaunay::{orient, Triangulation};
use super::membership::{ExactEngine, TIE_TOL};
use super::Semantics;
use crate::geom::{Aabb, Point2, UnitVec};

/// A clockwise circular arc; the closing lies to its left.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    /// Clockwise angular extent in `(0, π)`.
    pub sweep: f64,
    /// Sample index at the start, if the arc starts at a sample point.
    pub from: Option<usize>,
    pub to: Option<usize>,
    start_vertex: u32,
    end_vertex: u32,
}

impl Arc {
    pub fn end_angle(&self) -> f64 {
        self.start_angle - self.sweep
    }

    /// Point at fraction `t ∈ [0, 1]` along the arc.
    pub fn point_at(&self, t: f64) -> Point2 {
        self.center + UnitVec::from_angle(self.start_angle - t * self.sweep).vec() * self.radius
    }

    pub fn start(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point2 {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep
    }

    /// Direction of travel at fraction `t`.
    pub fn tangent(&self, t: f64) -> Point2 {
        let u = UnitVec::from_angle(self.start_angle - t * self.sweep);
        Point2::new(u.y(), -u.x())
    }

    pub fn distance(&self, x: Point2) -> f64 {
        let w = x - self.center;
        let along = (self.start_angle - w.angle()).rem_euclid(TAU);
        if along <= self.sweep {
            (w.norm() - self.radius).abs()
        } else {
            x.dist(self.start()).min(x.dist(self.end()))
        }
    }

    /// Contribution `½∮ x × dx` of the arc to an enclosed area.
    pub fn area_term(&self) -> f64 {
        0.5 * self.center.cross(self.end() - self.start()) - 0.5 * self.radius * self.radius * self.sweep
    }
}

/// A chain of arcs joined end to start.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryLoop {
    pub arcs: Vec<usize>,
    /// Total tangent turning: `2π` for outer boundaries, `-2π` for holes.
    pub turning: f64,
    pub closed: bool,
}

/// Boundary of the closing: arcs grouped into loops, plus sample points
/// that are isolated from every positive-area part.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ArcBoundary {
    pub arcs: Vec<Arc>,
    pub loops: Vec<BoundaryLoop>,
    pub isolated: Vec<usize>,
}

impl ArcBoundary {
    pub fn area(&self) -> f64 {
        self.arcs.iter().map(Arc::area_term).sum::<f64>().max(0.0)
    }

    pub fn perimeter(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    /// Distance from `x` to the nearest arc or isolated point.
    pub fn distance(&self, x: Point2, points: &[Point2]) -> f64 {
        let to_arcs = self.arcs.iter().map(|a| a.distance(x)).fold(f64::INFINITY, f64::min);
        self.isolated.iter().map(|&i| x.dist(points[i])).fold(to_arcs, f64::min)
    }

    /// `per_arc` evenly spaced points on every arc, endpoints included.
    pub fn sample_points(&self, per_arc: usize) -> Vec<Point2> {
        let per_arc = per_arc.max(2);
        self.arcs
            .iter()
            .flat_map(|a| (0..per_arc).map(move |k| a.point_at(k as f64 / (per_arc - 1) as f64)))
            .collect()
    }
}

/// Pieces shorter than this (in radians) are slivers produced by ties.
const MIN_SWEEP: f64 = 1e-9;

struct Candidate {
    center: Point2,
    start_angle: f64,
    sweep: f64,
    start_vertex: u32,
    end_vertex: u32,
    cuts: Vec<(f64, u32)>,
}

fn along(c: &Candidate, p: Point2) -> f64 {
    (c.start_angle - (p - c.center).angle()).rem_euclid(TAU)
}

pub(crate) fn build(tri: &Triangulation, engine: &ExactEngine, r: f64) -> ArcBoundary {
    let pts = tri.points();
    let n = pts.len() as u32;
    let lo = r * (1.0 - TIE_TOL);
    let mut cands = Vec::new();
    for e in tri.edges() {
        let (a, b) = (pts[e.a as usize], pts[e.b as usize]);
        let d = a.dist(b);
        if d >= 2.0 * r {
            continue;
        }
        let h = (r * r - d * d / 4.0).max(0.0).sqrt();
        let m = (a + b) * 0.5;
        let nrm = (b - a).perp() * (1.0 / d);
        for v in [m + nrm * h, m - nrm * h] {
            let empty = [e.left, e.right]
                .iter()
                .all(|s| s.map_or(true, |s| pts[s as usize].dist(v) >= lo));
            if !empty {
                continue;
            }
            let (s, t) = if orient(a, b, v) > 0.0 { (e.b, e.a) } else { (e.a, e.b) };
            let a0 = (pts[s as usize] - v).angle();
            let sweep = (a0 - (pts[t as usize] - v).angle()).rem_euclid(TAU);
            cands.push(Candidate { center: v, start_angle: a0, sweep, start_vertex: s, end_vertex: t, cuts: Vec::new() });
        }
    }
    if cands.is_empty() {
        return ArcBoundary { isolated: isolated(tri, engine, r, &[]), ..Default::default() };
    }

    // split at crossings between candidate arcs
    let centers: Vec<Point2> = cands.iter().map(|c| c.center).collect();
    let grid = point_buckets(&centers, 2.0 * r);
    let eps = 1e-10;
    let mut next_id = n;
    for i in 0..cands.len() {
        let mut partners = Vec::new();
        grid.visit(Aabb::new(centers[i], centers[i]).inflate(2.0 * r), |j| {
            if (j as usize) > i {
                partners.push(j as usize);
            }
        });
        for j in partners {
            let (ci, cj) = (centers[i], centers[j]);
            let dd = ci.dist(cj);
            if dd >= 2.0 * r || dd < 1e-12 * r {
                continue;
            }
            let m = (ci + cj) * 0.5;
            let h = (r * r - dd * dd / 4.0).max(0.0).sqrt();
            let nrm = (cj - ci).perp() * (1.0 / dd);
            for p in [m + nrm * h, m - nrm * h] {
                let ti = along(&cands[i], p);
                let tj = along(&cands[j], p);
                if ti > eps && ti < cands[i].sweep - eps && tj > eps && tj < cands[j].sweep - eps {
                    cands[i].cuts.push((ti, next_id));
                    cands[j].cuts.push((tj, next_id));
                    next_id += 1;
                }
            }
        }
    }

    let sample_index = |v: u32| (v < n).then(|| tri.first_index()[v as usize]);
    let mut arcs = Vec::new();
    for c in &mut cands {
        c.cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut stops = vec![(0.0, c.start_vertex)];
        stops.extend(c.cuts.iter().copied());
        stops.push((c.sweep, c.end_vertex));
        for w in stops.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if t1 - t0 <= MIN_SWEEP {
                continue;
            }
            let mid = c.center + UnitVec::from_angle(c.start_angle - 0.5 * (t0 + t1)).vec() * r;
            if !engine.contains(mid, Semantics::Closed) {
                continue;
            }
            arcs.push(Arc {
                center: c.center,
                radius: r,
                start_angle: c.start_angle - t0,
                sweep: t1 - t0,
                from: sample_index(v0),
                to: sample_index(v1),
                start_vertex: v0,
                end_vertex: v1,
            });
        }
    }
    let loops = chain(&arcs, next_id as usize);
    let isolated = isolated(tri, engine, r, &arcs);
    ArcBoundary { arcs, loops, isolated }
}

fn signed_turn(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

fn chain(arcs: &[Arc], vertex_count: usize) -> Vec<BoundaryLoop> {
    let mut outgoing = vec![Vec::new(); vertex_count];
    for (k, a) in arcs.iter().enumerate() {
        outgoing[a.start_vertex as usize].push(k);
    }
    let mut used = vec![false; arcs.len()];
    let mut loops = Vec::new();
    for first in 0..arcs.len() {
        if used[first] {
            continue;
        }
        used[first] = true;
        let mut members = vec![first];
        let mut turning = -arcs[first].sweep;
        let mut cur = first;
        let mut closed = false;
        loop {
            let t_in = arcs[cur].tangent(1.0);
            let back = -t_in;
            let best = outgoing[arcs[cur].end_vertex as usize]
                .iter()
                .copied()
                .filter(|&k| !used[k] || k == first)
                .min_by(|&x, &y| {
                    let cw = |k: usize| {
                        let a = (back.angle() - arcs[k].tangent(0.0).angle()).rem_euclid(TAU);
                        if a == 0.0 {
                            TAU
                        } else {
                            a
                        }
                    };
                    cw(x).total_cmp(&cw(y))
                });
            let Some(next) = best else { break };
            turning += signed_turn(t_in, arcs[next].tangent(0.0));
            if next == first {
                closed = true;
                break;
            }
            used[next] = true;
            members.push(next);
            turning -= arcs[next].sweep;
            cur = next;
        }
        loops.push(BoundaryLoop { arcs: members, turning, closed });
    }
    loops
}

fn isolated(tri: &Triangulation, engine: &ExactEngine, r: f64, arcs: &[Arc]) -> Vec<usize> {
    let lo = r * (1.0 - TIE_TOL);
    let mut on_arc = vec![false; tri.points().len()];
    for a in arcs {
        for v in [a.start_vertex, a.end_vertex] {
            if let Some(f) = on_arc.get_mut(v as usize) {
                *f = true;
            }
        }
    }
    let reach = engine.reach();
    tri.vertex_of()
        .iter()
        .enumerate()
        .filter(|&(_, &v)| !on_arc[v as usize] && reach[v as usize] >= lo)
        .map(|(i, _)| i)
        .collect()
}

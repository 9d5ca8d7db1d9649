//! Planar primitives and the closed-form regions used by the unavoidable-family
//! constructions: cones and circular sectors, Reuleaux triangles, chord regions,
//! contact geometry of two tangent-ish disks, and rigid motions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, precondition, Result};

/// A point (or free vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };
    /// The unit vector `(0, 1)`.
    pub const E2: Point2 = Point2 { x: 0.0, y: 1.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Point2) -> f64 {
        (self - o).norm2()
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A direction on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec(Point2);

impl UnitVec {
    /// Normalizes `(x, y)`; fails on the zero vector.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let v = Point2::new(x, y);
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        Ok(UnitVec(v * (1.0 / n)))
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitVec(Point2::new(theta.cos(), theta.sin()))
    }

    #[inline]
    pub fn vec(self) -> Point2 {
        self.0
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }
}

/// Counter-clockwise rotation by `theta` radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub theta: f64,
}

impl Rotation {
    pub const fn new(theta: f64) -> Self {
        Rotation { theta }
    }

    pub fn inverse(self) -> Self {
        Rotation { theta: -self.theta }
    }

    /// Row-major matrix `[[cos, -sin], [sin, cos]]`.
    pub fn matrix(self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[c, -s], [s, c]]
    }

    #[inline]
    pub fn apply(self, v: Point2) -> Point2 {
        rotate(self, v)
    }
}

/// Rotates `v` counter-clockwise by `rot.theta`.
#[inline]
pub fn rotate(rot: Rotation, v: Point2) -> Point2 {
    let (s, c) = rot.theta.sin_cos();
    Point2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Angle in `[0, π]` between two nonzero vectors.
pub fn angle_between(u: Point2, v: Point2) -> Result<f64> {
    let nu = u.norm();
    let nv = v.norm();
    if !(nu > 0.0) || !(nv > 0.0) {
        return domain("angle between a zero vector is undefined");
    }
    let c = (u.dot(v) / (nu * nv)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// Membership in the closed cone `{x : <x,u> >= |x| cos θ}`. The origin is
/// inside every cone.
#[inline]
pub fn cone_contains(u: UnitVec, theta: f64, x: Point2) -> bool {
    x.dot(u.vec()) >= x.norm() * theta.cos()
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn new(min: Point2, max: Point2) -> Self {
        Aabb { min, max }
    }

    pub fn around_points(points: &[Point2]) -> Option<Self> {
        let first = *points.first()?;
        let mut b = Aabb::new(first, first);
        for &p in &points[1..] {
            b.include(p);
        }
        Some(b)
    }

    pub fn include(&mut self, p: Point2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn inflate(self, by: f64) -> Self {
        Aabb::new(
            Point2::new(self.min.x - by, self.min.y - by),
            Point2::new(self.max.x + by, self.max.y + by),
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        !(self.width() > 0.0 && self.height() > 0.0)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Euclidean distance from `p` to the box (zero inside).
    #[inline]
    pub fn distance_to(&self, p: Point2) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        Point2::new(
            self.min.x + rng.gen::<f64>() * self.width(),
            self.min.y + rng.gen::<f64>() * self.height(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Open,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
    pub boundary_kind: BoundaryKind,
}

impl Disk {
    pub fn closed(center: Point2, radius: f64) -> Self {
        Disk { center, radius, boundary_kind: BoundaryKind::Closed }
    }

    pub fn open(center: Point2, radius: f64) -> Self {
        Disk { center, radius, boundary_kind: BoundaryKind::Open }
    }

    pub fn contains(&self, p: Point2) -> bool {
        let d2 = p.dist2(self.center);
        let r2 = self.radius * self.radius;
        match self.boundary_kind {
            BoundaryKind::Closed => d2 <= r2,
            BoundaryKind::Open => d2 < r2,
        }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::new(self.center, self.center).inflate(self.radius)
    }
}

/// The circular sector `apex + (C_u^θ ∩ B(0, radius))` with full central angle
/// `2·half_angle`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub apex: Point2,
    pub direction: UnitVec,
    pub half_angle: f64,
    pub radius: f64,
}

impl Sector {
    pub fn new(apex: Point2, direction: UnitVec, half_angle: f64, radius: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&half_angle) {
            return domain(format!("sector half-angle {half_angle} outside [0, π/2]"));
        }
        if !(radius > 0.0) {
            return domain(format!("sector radius {radius} must be positive"));
        }
        Ok(Sector { apex, direction, half_angle, radius })
    }

    /// The π/6 sector `C_{u,r}` used throughout the unavoidable-family proofs.
    pub fn pi_6(apex: Point2, direction: UnitVec, radius: f64) -> Result<Self> {
        Sector::new(apex, direction, FRAC_PI_6, radius)
    }

    pub fn contains(&self, p: Point2) -> bool {
        let v = p - self.apex;
        v.norm2() <= self.radius * self.radius && cone_contains(self.direction, self.half_angle, v)
    }

    pub fn area(&self) -> f64 {
        sector_area(self)
    }

    /// Ends of the two bounding radii, `apex + r·R_θ(u)` and `apex + r·R_θ⁻¹(u)`.
    pub fn radius_ends(&self) -> (Point2, Point2) {
        let u = self.direction.vec() * self.radius;
        let rot = Rotation::new(self.half_angle);
        (self.apex + rot.apply(u), self.apex + rot.inverse().apply(u))
    }

    /// Largest distance from `y` to a point of the sector. Exact: the maximum of
    /// a convex function over the sector sits at the apex, a radius end, or the
    /// farthest arc point.
    pub fn farthest_distance(&self, y: Point2) -> f64 {
        let (v1, v2) = self.radius_ends();
        let mut best = y.dist(self.apex).max(y.dist(v1)).max(y.dist(v2));
        let away = self.apex - y;
        let n = away.norm();
        if n == 0.0 {
            return best.max(self.radius);
        }
        let dir = away * (1.0 / n);
        if cone_contains(self.direction, self.half_angle, dir) {
            best = best.max(n + self.radius);
        }
        best
    }

    pub fn bbox(&self) -> Aabb {
        let (v1, v2) = self.radius_ends();
        let mut b = Aabb::new(self.apex, self.apex);
        b.include(v1);
        b.include(v2);
        for k in 0..4 {
            let d = Point2::new(
                (k as f64 * FRAC_PI_2).cos().round(),
                (k as f64 * FRAC_PI_2).sin().round(),
            );
            if cone_contains(self.direction, self.half_angle, d) {
                b.include(self.apex + d * self.radius);
            }
        }
        b
    }
}

/// Area of a circular sector: `half_angle · radius²`.
pub fn sector_area(s: &Sector) -> f64 {
    s.half_angle * s.radius * s.radius
}

/// The Reuleaux triangle `B(apex,r) ∩ B(v1,r) ∩ B(v2,r)` with
/// `v1 = apex + r·R_{π/6}(u)` and `v2 = apex + r·R_{π/6}⁻¹(u)`. It equals the
/// intersection of all `B(y, r)` with `y` in the π/6 sector of direction `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReuleauxRegion {
    pub apex: Point2,
    pub direction: UnitVec,
    pub radius: f64,
}

impl ReuleauxRegion {
    pub fn vertices(&self) -> [Point2; 3] {
        let u = self.direction.vec() * self.radius;
        let rot = Rotation::new(FRAC_PI_6);
        [self.apex, self.apex + rot.apply(u), self.apex + rot.inverse().apply(u)]
    }

    pub fn contains(&self, p: Point2) -> bool {
        let r2 = self.radius * self.radius * (1.0 + 1e-12);
        self.vertices().iter().all(|&c| p.dist2(c) <= r2)
    }

    /// Largest violated disk constraint, `max_k |p - c_k| - r`; positive outside.
    pub fn excess(&self, p: Point2) -> f64 {
        self.vertices()
            .iter()
            .map(|&c| p.dist(c) - self.radius)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn area(&self) -> f64 {
        (PI - 3f64.sqrt()) * self.radius * self.radius / 2.0
    }

    pub fn bbox(&self) -> Aabb {
        // Each arc is at most π/3 wide; sampling its ends and extreme points suffices.
        let vs = self.vertices();
        let mut b = Aabb::new(vs[0], vs[0]);
        for k in 0..3 {
            for j in 0..3 {
                if j != k {
                    b.include(vs[j]);
                }
            }
            for q in 0..4 {
                let d = Point2::new(
                    (q as f64 * FRAC_PI_2).cos().round(),
                    (q as f64 * FRAC_PI_2).sin().round(),
                );
                let cand = vs[k] + d * self.radius;
                if self.contains_with_tol(cand, 1e-12) {
                    b.include(cand);
                }
            }
        }
        b
    }

    fn contains_with_tol(&self, p: Point2, tol: f64) -> bool {
        self.excess(p) <= tol * self.radius
    }

    pub fn farthest_distance(&self, y: Point2) -> f64 {
        let vs = self.vertices();
        let mut best = vs.iter().map(|&v| y.dist(v)).fold(0.0, f64::max);
        for &c in &vs {
            let away = c - y;
            let n = away.norm();
            if n == 0.0 {
                continue;
            }
            let cand = c + away * (self.radius / n);
            if self.contains_with_tol(cand, 1e-12) {
                best = best.max(y.dist(cand));
            }
        }
        best
    }
}

/// Builds the Reuleaux triangle with apex at the origin.
pub fn reuleaux(u: UnitVec, r: f64) -> Result<ReuleauxRegion> {
    if !(r > 0.0) {
        return domain(format!("Reuleaux radius {r} must be positive"));
    }
    Ok(ReuleauxRegion { apex: Point2::ORIGIN, direction: u, radius: r })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChordSide {
    Full,
    /// Intersected with `{x₁ >= 0}`.
    RightHalf,
    /// Intersected with `{x₁ <= 0}`.
    LeftHalf,
}

/// `{x : -h1 <= x₂ <= 0} ∩ B(-r·e₂, r)`, optionally halved by the vertical axis.
/// This is the circular segment of height `h1` at the top of the low disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChordRegion {
    pub r: f64,
    pub h1: f64,
    pub side: ChordSide,
}

impl ChordRegion {
    pub fn new(r: f64, h1: f64, side: ChordSide) -> Result<Self> {
        if !(r > 0.0) {
            return domain(format!("chord region radius {r} must be positive"));
        }
        if !(0.0..=r).contains(&h1) {
            return domain(format!("chord height {h1} outside [0, {r}]"));
        }
        Ok(ChordRegion { r, h1, side })
    }

    /// Half-length of the bottom chord, `sqrt(2 r h1 - h1²)`.
    pub fn half_chord(&self) -> f64 {
        (2.0 * self.r * self.h1 - self.h1 * self.h1).max(0.0).sqrt()
    }

    pub fn contains(&self, p: Point2) -> bool {
        let in_side = match self.side {
            ChordSide::Full => true,
            ChordSide::RightHalf => p.x >= 0.0,
            ChordSide::LeftHalf => p.x <= 0.0,
        };
        in_side
            && p.y >= -self.h1
            && p.y <= 0.0
            && p.dist2(Point2::new(0.0, -self.r)) <= self.r * self.r
    }

    pub fn area(&self) -> f64 {
        chord_region_area(self)
    }

    fn corners(&self) -> Vec<Point2> {
        let lam = self.half_chord();
        let top = Point2::ORIGIN;
        let bottom = Point2::new(0.0, -self.h1);
        let right = Point2::new(lam, -self.h1);
        let left = Point2::new(-lam, -self.h1);
        match self.side {
            ChordSide::Full => vec![top, left, right],
            ChordSide::RightHalf => vec![top, bottom, right],
            ChordSide::LeftHalf => vec![top, bottom, left],
        }
    }

    fn on_arc(&self, q: Point2) -> bool {
        let eps = 1e-12 * self.r;
        let side_ok = match self.side {
            ChordSide::Full => true,
            ChordSide::RightHalf => q.x >= -eps,
            ChordSide::LeftHalf => q.x <= eps,
        };
        side_ok && q.y >= -self.h1 - eps
    }

    /// Exact farthest distance from `y` (canonical frame).
    pub fn farthest_distance(&self, y: Point2) -> f64 {
        let mut best = self.corners().iter().map(|&c| y.dist(c)).fold(0.0, f64::max);
        let center = Point2::new(0.0, -self.r);
        let away = center - y;
        let n = away.norm();
        if n > 0.0 {
            let q = center + away * (self.r / n);
            if self.on_arc(q) {
                best = best.max(n + self.r);
            }
        }
        best
    }

    pub fn bbox(&self) -> Aabb {
        let lam = self.half_chord();
        let (lo, hi) = match self.side {
            ChordSide::Full => (-lam, lam),
            ChordSide::RightHalf => (0.0, lam),
            ChordSide::LeftHalf => (-lam, 0.0),
        };
        Aabb::new(Point2::new(lo, -self.h1), Point2::new(hi, 0.0))
    }
}

/// Area of a circular segment of height `h` cut from a circle of radius `radius`:
/// `R² acos((R-h)/R) - (R-h) sqrt(2Rh - h²)`.
pub fn circular_segment_area(radius: f64, h: f64) -> f64 {
    let a = radius - h;
    let c = (a / radius).clamp(-1.0, 1.0);
    radius * radius * c.acos() - a * (2.0 * radius * h - h * h).max(0.0).sqrt()
}

/// Area of a chord region; halves are exactly half the full segment.
pub fn chord_region_area(c: &ChordRegion) -> f64 {
    let full = circular_segment_area(c.r, c.h1);
    match c.side {
        ChordSide::Full => full,
        ChordSide::RightHalf | ChordSide::LeftHalf => full / 2.0,
    }
}

/// Area of the cap `{0 <= <z,e₂> <= h2} ∩ B(-(α-h2)e₂, α)`: a circular segment
/// of radius `alpha` and height `h2`.
pub fn cap_region_area(alpha: f64, h2: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return domain(format!("cap radius {alpha} must be positive"));
    }
    if !(0.0..=alpha).contains(&h2) {
        return domain(format!("cap height {h2} outside [0, {alpha}]"));
    }
    Ok(circular_segment_area(alpha, h2))
}

/// Heights and half-chord where `B((α-ρ)e₂, α)` meets `B(-r e₂, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactGeometry {
    pub alpha: f64,
    pub r: f64,
    pub rho: f64,
    pub h1: f64,
    pub h2: f64,
    pub lambda: f64,
    pub nu: f64,
}

/// Solves `h1 + h2 = ρ`, `(r-h1)² + λ² = r²`, `(α-h2)² + λ² = α²` in closed form,
/// together with `ν = sqrt(ρ(2α-ρ))`.
pub fn contact_geometry(alpha: f64, r: f64, rho: f64) -> Result<ContactGeometry> {
    let slack = 1e-12 * alpha.max(r);
    if !(r > 0.0 && alpha > 0.0) {
        return precondition("contact geometry needs positive α and r");
    }
    if r > alpha + slack {
        return precondition(format!("r = {r} exceeds α = {alpha}"));
    }
    if !(rho >= 0.0) || rho > r / 2.0 + slack {
        return precondition(format!("ρ = {rho} outside [0, r/2] with r = {r}"));
    }
    let denom = 2.0 * (alpha + r - rho);
    let h1 = rho * (2.0 * alpha - rho) / denom;
    let h2 = rho * (2.0 * r - rho) / denom;
    let lambda = (2.0 * r * h1 - h1 * h1).max(0.0).sqrt();
    let nu = (rho * (2.0 * alpha - rho)).max(0.0).sqrt();
    Ok(ContactGeometry { alpha, r, rho, h1, h2, lambda, nu })
}

impl ContactGeometry {
    /// Largest absolute residual of the three defining equations.
    pub fn residual(&self) -> f64 {
        let e1 = (self.r - self.h1).powi(2) + self.lambda.powi(2) - self.r * self.r;
        let e2 = (self.alpha - self.h2).powi(2) + self.lambda.powi(2) - self.alpha * self.alpha;
        let e3 = self.h1 + self.h2 - self.rho;
        e1.abs().max(e2.abs()).max(e3.abs())
    }
}

/// `x ↦ M x + t` with `M` orthogonal (rotation or reflection).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotion {
    pub m: [[f64; 2]; 2],
    pub translation: Point2,
}

impl RigidMotion {
    pub fn new(m: [[f64; 2]; 2], translation: Point2) -> Result<Self> {
        let c0 = Point2::new(m[0][0], m[1][0]);
        let c1 = Point2::new(m[0][1], m[1][1]);
        let err = (c0.norm2() - 1.0).abs().max((c1.norm2() - 1.0).abs()).max(c0.dot(c1).abs());
        if !(err <= 1e-12) {
            return domain("rigid motion coefficients are not orthogonal");
        }
        Ok(RigidMotion { m, translation })
    }

    pub fn identity() -> Self {
        RigidMotion { m: [[1.0, 0.0], [0.0, 1.0]], translation: Point2::ORIGIN }
    }

    pub fn from_rotation(rot: Rotation, translation: Point2) -> Self {
        RigidMotion { m: rot.matrix(), translation }
    }

    pub fn translation(t: Point2) -> Self {
        RigidMotion { translation: t, ..Self::identity() }
    }

    /// Mirror across the vertical axis, `(x₁, x₂) ↦ (-x₁, x₂)`.
    pub fn reflect_vertical_axis() -> Self {
        RigidMotion { m: [[-1.0, 0.0], [0.0, 1.0]], translation: Point2::ORIGIN }
    }

    /// The rotation taking `e₂` to `target`, followed by translation to `origin`.
    pub fn frame(target_of_e2: UnitVec, origin: Point2) -> Self {
        // R_φ e₂ = (-sin φ, cos φ)
        let phi = (-target_of_e2.x()).atan2(target_of_e2.y());
        RigidMotion::from_rotation(Rotation::new(phi), origin)
    }

    #[inline]
    pub fn apply_linear(&self, v: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        self.apply_linear(p) + self.translation
    }

    pub fn inverse(&self) -> Self {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let inv = RigidMotion { m: mt, translation: Point2::ORIGIN };
        let t = -inv.apply_linear(self.translation);
        RigidMotion { m: mt, translation: t }
    }

    #[inline]
    pub fn apply_inverse(&self, p: Point2) -> Point2 {
        let v = p - self.translation;
        Point2::new(
            self.m[0][0] * v.x + self.m[1][0] * v.y,
            self.m[0][1] * v.x + self.m[1][1] * v.y,
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidMotion) -> Self {
        let a = self.m;
        let b = other.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        RigidMotion { m, translation: self.apply(other.translation) }
    }

    pub fn determinant(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
}

/// A measurable planar set with exact membership and area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Disk(Disk),
    Sector(Sector),
    Reuleaux(ReuleauxRegion),
    /// A chord region placed by a rigid motion of its canonical frame.
    Chord { chord: ChordRegion, motion: RigidMotion },
}

impl Region {
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Region::Disk(d) => d.contains(p),
            Region::Sector(s) => s.contains(p),
            Region::Reuleaux(t) => t.contains(p),
            Region::Chord { chord, motion } => chord.contains(motion.apply_inverse(p)),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Disk(d) => d.area(),
            Region::Sector(s) => s.area(),
            Region::Reuleaux(t) => t.area(),
            Region::Chord { chord, .. } => chord.area(),
        }
    }

    pub fn bbox(&self) -> Aabb {
        match self {
            Region::Disk(d) => d.bbox(),
            Region::Sector(s) => s.bbox(),
            Region::Reuleaux(t) => t.bbox(),
            Region::Chord { chord, motion } => {
                let b = chord.bbox();
                let corners = [
                    b.min,
                    b.max,
                    Point2::new(b.min.x, b.max.y),
                    Point2::new(b.max.x, b.min.y),
                ]
                .map(|c| motion.apply(c));
                Aabb::around_points(&corners).unwrap()
            }
        }
    }

    /// Largest distance from `y` to a point of the region; `U ⊂ B̄(y, r)` iff
    /// this is at most `r`.
    pub fn farthest_distance(&self, y: Point2) -> f64 {
        match self {
            Region::Disk(d) => y.dist(d.center) + d.radius,
            Region::Sector(s) => s.farthest_distance(y),
            Region::Reuleaux(t) => t.farthest_distance(y),
            Region::Chord { chord, motion } => chord.farthest_distance(motion.apply_inverse(y)),
        }
    }

    /// Applies a rigid motion to the region.
    pub fn transformed(&self, t: &RigidMotion) -> Region {
        let map_dir = |u: UnitVec| {
            let v = t.apply_linear(u.vec());
            UnitVec::new(v.x, v.y).expect("orthogonal map keeps unit length")
        };
        match *self {
            Region::Disk(d) => Region::Disk(Disk { center: t.apply(d.center), ..d }),
            Region::Sector(s) => {
                Region::Sector(Sector { apex: t.apply(s.apex), direction: map_dir(s.direction), ..s })
            }
            Region::Reuleaux(r) => Region::Reuleaux(ReuleauxRegion {
                apex: t.apply(r.apex),
                direction: map_dir(r.direction),
                ..r
            }),
            Region::Chord { chord, motion } => Region::Chord { chord, motion: t.compose(&motion) },
        }
    }

    /// Draws `count` points uniformly from the region by rejection from its box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Point2> {
        let bbox = self.bbox();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        if bbox.is_empty() {
            return out;
        }
        let mut attempts = 0usize;
        while out.len() < count && attempts < count * 10_000 {
            attempts += 1;
            let p = bbox.sample(&mut rng);
            if self.contains(p) {
                out.push(p);
            }
        }
        out
    }
}

/// Hit-or-miss Monte Carlo area of `{p in bbox : inside(p)}`. Returns the
/// estimate and its binomial standard error.
pub fn region_area_mc<F>(inside: F, bbox: Aabb, samples: usize, seed: u64) -> Result<(f64, f64)>
where
    F: Fn(Point2) -> bool,
{
    if bbox.is_empty() {
        return domain("Monte Carlo bounding box is empty");
    }
    if samples == 0 {
        return domain("Monte Carlo needs at least one sample");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        if inside(bbox.sample(&mut rng)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let a = bbox.area();
    Ok((p * a, a * (p * (1.0 - p) / samples as f64).sqrt()))
}

/// Area of the intersection of two disks with radii `r1`, `r2` at center
/// distance `d`.
pub fn lens_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    let small = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return PI * small * small;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k.max(0.0).sqrt()
}

//! Ground-truth supports whose boundaries admit a freely rolling ball, with
//! exact membership, boundary distance, inner parallel-band profiles, and
//! seeded bounded-density sampling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Error, Result};
use crate::geom::{Aabb, Point2, UnitVec};
use crate::hull::PointCloud;

/// Shape families with closed-form boundary distance.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeKind {
    Disk { center: Point2, radius: f64 },
    Annulus { center: Point2, inner: f64, outer: f64 },
    /// Disjoint disks `(center, radius)`.
    MultiDisk { disks: Vec<(Point2, f64)> },
    /// All points within `radius` of the segment `[a, b]`.
    Stadium { a: Point2, b: Point2, radius: f64 },
}

/// A support set together with the rolling radius it is certified for.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportShape {
    kind: ShapeKind,
    alpha: f64,
}

fn segment_closest(a: Point2, b: Point2, x: Point2) -> Point2 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return a;
    }
    let t = ((x - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

impl SupportShape {
    pub fn disk(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Config(format!("disk radius {radius} must be positive")));
        }
        Ok(Self::certified(ShapeKind::Disk { center, radius }))
    }

    pub fn annulus(center: Point2, inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::Config(format!("annulus radii must satisfy 0 < {inner} < {outer}")));
        }
        Ok(Self::certified(ShapeKind::Annulus { center, inner, outer }))
    }

    pub fn multi_disk(disks: Vec<(Point2, f64)>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::Config("multi_disk needs at least one component".into()));
        }
        if disks.iter().any(|&(_, r)| !(r > 0.0)) {
            return Err(Error::Config("multi_disk radii must be positive".into()));
        }
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                let gap = disks[i].0.dist(disks[j].0) - disks[i].1 - disks[j].1;
                if !(gap > 0.0) {
                    return Err(Error::Config(format!("multi_disk components {i} and {j} overlap")));
                }
            }
        }
        Ok(Self::certified(ShapeKind::MultiDisk { disks }))
    }

    pub fn stadium(a: Point2, b: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Config(format!("stadium radius {radius} must be positive")));
        }
        Ok(Self::certified(ShapeKind::Stadium { a, b, radius }))
    }

    fn certified(kind: ShapeKind) -> Self {
        let alpha = Self::max_alpha(&kind);
        SupportShape { kind, alpha }
    }

    /// Largest radius for which a ball rolls freely inside the set and inside
    /// the closure of its complement.
    fn max_alpha(kind: &ShapeKind) -> f64 {
        match kind {
            ShapeKind::Disk { radius, .. } => *radius,
            ShapeKind::Annulus { inner, outer, .. } => inner.min((outer - inner) / 2.0),
            ShapeKind::MultiDisk { disks } => {
                let mut a = disks.iter().map(|d| d.1).fold(f64::INFINITY, f64::min);
                for i in 0..disks.len() {
                    for j in i + 1..disks.len() {
                        let gap = disks[i].0.dist(disks[j].0) - disks[i].1 - disks[j].1;
                        a = a.min(gap / 2.0);
                    }
                }
                a
            }
            ShapeKind::Stadium { radius, .. } => *radius,
        }
    }

    /// Lowers the certified rolling radius; fails if `alpha` exceeds what the
    /// geometry supports.
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        let max = Self::max_alpha(&self.kind);
        if !(alpha > 0.0) || alpha > max * (1.0 + 1e-12) {
            return Err(Error::Config(format!("alpha {alpha} not in (0, {max}] for this shape")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ShapeKind::Disk { .. } => "disk",
            ShapeKind::Annulus { .. } => "annulus",
            ShapeKind::MultiDisk { .. } => "multi_disk",
            ShapeKind::Stadium { .. } => "stadium",
        }
    }

    /// Positive inside, negative outside, zero on the boundary.
    pub fn signed_distance(&self, x: Point2) -> f64 {
        match &self.kind {
            ShapeKind::Disk { center, radius } => radius - x.dist(*center),
            ShapeKind::Annulus { center, inner, outer } => {
                let d = x.dist(*center);
                (outer - d).min(d - inner)
            }
            ShapeKind::MultiDisk { disks } => disks
                .iter()
                .map(|&(c, r)| r - x.dist(c))
                .fold(f64::NEG_INFINITY, f64::max),
            ShapeKind::Stadium { a, b, radius } => radius - x.dist(segment_closest(*a, *b, x)),
        }
    }

    pub fn contains(&self, x: Point2) -> bool {
        self.signed_distance(x) >= 0.0
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, x: Point2) -> Result<f64> {
        let sd = self.signed_distance(x);
        if sd < 0.0 {
            return precondition(format!("point ({}, {}) lies outside the support", x.x, x.y));
        }
        Ok(sd)
    }

    /// Metric projection of an interior point onto the boundary and the
    /// outward unit normal there.
    pub fn boundary_projection(&self, x: Point2) -> Result<(Point2, UnitVec)> {
        self.boundary_distance(x)?;
        let radial = |c: Point2| UnitVec::new(x.x - c.x, x.y - c.y).unwrap_or(UnitVec::from_angle(0.0));
        Ok(match &self.kind {
            ShapeKind::Disk { center, radius } => {
                let u = radial(*center);
                (*center + u.vec() * *radius, u)
            }
            ShapeKind::Annulus { center, inner, outer } => {
                let u = radial(*center);
                let d = x.dist(*center);
                if outer - d <= d - inner {
                    (*center + u.vec() * *outer, u)
                } else {
                    let inward = UnitVec::new(-u.x(), -u.y()).unwrap();
                    (*center + u.vec() * *inner, inward)
                }
            }
            ShapeKind::MultiDisk { disks } => {
                let &(c, r) = disks
                    .iter()
                    .max_by(|p, q| (p.1 - x.dist(p.0)).total_cmp(&(q.1 - x.dist(q.0))))
                    .unwrap();
                let u = radial(c);
                (c + u.vec() * r, u)
            }
            ShapeKind::Stadium { a, b, radius } => {
                let q = segment_closest(*a, *b, x);
                let u = UnitVec::new(x.x - q.x, x.y - q.y).unwrap_or_else(|_| {
                    let t = *b - *a;
                    UnitVec::new(-t.y, t.x).unwrap_or(UnitVec::from_angle(PI / 2.0))
                });
                (q + u.vec() * *radius, u)
            }
        })
    }

    pub fn area(&self) -> f64 {
        match &self.kind {
            ShapeKind::Disk { radius, .. } => PI * radius * radius,
            ShapeKind::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            ShapeKind::MultiDisk { disks } => disks.iter().map(|d| PI * d.1 * d.1).sum(),
            ShapeKind::Stadium { a, b, radius } => 2.0 * radius * a.dist(*b) + PI * radius * radius,
        }
    }

    pub fn perimeter(&self) -> f64 {
        match &self.kind {
            ShapeKind::Disk { radius, .. } => 2.0 * PI * radius,
            ShapeKind::Annulus { inner, outer, .. } => 2.0 * PI * (inner + outer),
            ShapeKind::MultiDisk { disks } => disks.iter().map(|d| 2.0 * PI * d.1).sum(),
            ShapeKind::Stadium { a, b, radius } => 2.0 * a.dist(*b) + 2.0 * PI * radius,
        }
    }

    /// `F(z) = μ{x ∈ S : d(x, ∂S) <= z}` for `0 <= z < alpha`.
    pub fn steiner_profile(&self) -> SteinerProfile {
        let coefficients = match &self.kind {
            ShapeKind::Disk { radius, .. } => [0.0, 2.0 * PI * radius, -PI],
            ShapeKind::Annulus { inner, outer, .. } => [0.0, 2.0 * PI * (inner + outer), 0.0],
            ShapeKind::MultiDisk { disks } => {
                let k = disks.len() as f64;
                [0.0, disks.iter().map(|d| 2.0 * PI * d.1).sum(), -PI * k]
            }
            ShapeKind::Stadium { a, b, radius } => [0.0, 2.0 * a.dist(*b) + 2.0 * PI * radius, -PI],
        };
        SteinerProfile { coefficients, valid_below: self.alpha }
    }

    pub fn bbox(&self) -> Aabb {
        match &self.kind {
            ShapeKind::Disk { center, radius } => Aabb::new(*center, *center).inflate(*radius),
            ShapeKind::Annulus { center, outer, .. } => Aabb::new(*center, *center).inflate(*outer),
            ShapeKind::MultiDisk { disks } => {
                let mut b = Aabb::new(disks[0].0, disks[0].0).inflate(disks[0].1);
                for &(c, r) in &disks[1..] {
                    let d = Aabb::new(c, c).inflate(r);
                    b.include(d.min);
                    b.include(d.max);
                }
                b
            }
            ShapeKind::Stadium { a, b, radius } => {
                let mut bb = Aabb::new(*a, *a);
                bb.include(*b);
                bb.inflate(*radius)
            }
        }
    }

    pub fn centroid(&self) -> Point2 {
        match &self.kind {
            ShapeKind::Disk { center, .. } | ShapeKind::Annulus { center, .. } => *center,
            ShapeKind::MultiDisk { disks } => {
                let w: f64 = disks.iter().map(|d| d.1 * d.1).sum();
                disks.iter().fold(Point2::ORIGIN, |acc, &(c, r)| acc + c * (r * r / w))
            }
            ShapeKind::Stadium { a, b, .. } => (*a + *b) * 0.5,
        }
    }

    /// Support function `max_{x in S} <c, x>`.
    pub fn support_function(&self, c: Point2) -> f64 {
        let n = c.norm();
        match &self.kind {
            ShapeKind::Disk { center, radius } => c.dot(*center) + radius * n,
            ShapeKind::Annulus { center, outer, .. } => c.dot(*center) + outer * n,
            ShapeKind::MultiDisk { disks } => disks
                .iter()
                .map(|&(ctr, r)| c.dot(ctr) + r * n)
                .fold(f64::NEG_INFINITY, f64::max),
            ShapeKind::Stadium { a, b, radius } => c.dot(*a).max(c.dot(*b)) + radius * n,
        }
    }

    /// `count` boundary points spread evenly by arc length, with outward normals.
    pub fn boundary_points(&self, count: usize) -> Vec<(Point2, UnitVec)> {
        let total = self.perimeter();
        (0..count)
            .map(|k| self.boundary_at((k as f64 + 0.5) / count as f64 * total))
            .collect()
    }

    fn boundary_at(&self, mut s: f64) -> (Point2, UnitVec) {
        let circle = |c: Point2, r: f64, s: f64, outward: bool| {
            let u = UnitVec::from_angle(s / r);
            let n = if outward { u } else { UnitVec::new(-u.x(), -u.y()).unwrap() };
            (c + u.vec() * r, n)
        };
        match &self.kind {
            ShapeKind::Disk { center, radius } => circle(*center, *radius, s, true),
            ShapeKind::Annulus { center, inner, outer } => {
                let lo = 2.0 * PI * outer;
                if s < lo {
                    circle(*center, *outer, s, true)
                } else {
                    circle(*center, *inner, s - lo, false)
                }
            }
            ShapeKind::MultiDisk { disks } => {
                for &(c, r) in disks {
                    let len = 2.0 * PI * r;
                    if s < len {
                        return circle(c, r, s, true);
                    }
                    s -= len;
                }
                let &(c, r) = disks.last().unwrap();
                circle(c, r, 0.0, true)
            }
            ShapeKind::Stadium { a, b, radius } => {
                let len = a.dist(*b);
                let t = if len > 0.0 { (*b - *a) * (1.0 / len) } else { Point2::new(1.0, 0.0) };
                let n = t.perp() * -1.0; // right-hand normal of a→b
                let nu = UnitVec::new(n.x, n.y).unwrap();
                let nd = UnitVec::new(-n.x, -n.y).unwrap();
                let arc = PI * radius;
                if s < len {
                    return (*a + t * s + n * *radius, nu);
                }
                s -= len;
                if s < arc {
                    // around b, from the right side to the left side
                    let u = crate::geom::rotate(crate::geom::Rotation::new(s / radius), n);
                    return (*b + u * *radius, UnitVec::new(u.x, u.y).unwrap());
                }
                s -= arc;
                if s < len {
                    return (*b - t * s - n * *radius, nd);
                }
                s -= len;
                let u = crate::geom::rotate(crate::geom::Rotation::new(s / radius), -n);
                (*a + u * *radius, UnitVec::new(u.x, u.y).unwrap())
            }
        }
    }
}

/// Inner parallel-band measure `F(z) = c0 + c1 z + c2 z²` on `[0, alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteinerProfile {
    pub coefficients: [f64; 3],
    pub valid_below: f64,
}

impl SteinerProfile {
    pub fn eval(&self, z: f64) -> f64 {
        let [c0, c1, c2] = self.coefficients;
        c0 + z * (c1 + z * c2)
    }

    pub fn derivative(&self, z: f64) -> f64 {
        self.coefficients[1] + 2.0 * self.coefficients[2] * z
    }
}

/// Result of probing inner and outer rolling disks along the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct RollingReport {
    pub alpha: f64,
    pub boundary_samples: usize,
    /// Probes of the inner disk found outside the set.
    pub inner_violations: usize,
    /// Probes of the outer disk found in the interior of the set.
    pub outer_violations: usize,
    pub worst_depth: f64,
}

impl RollingReport {
    pub fn passed(&self) -> bool {
        self.inner_violations == 0 && self.outer_violations == 0
    }
}

/// Checks `B(s - αη, α) ⊂ S` and `B(s + αη, α) ∩ int S = ∅` at evenly spaced
/// boundary points `s` using a polar grid of probes in each disk.
pub fn verify_rolling(shape: &SupportShape, alpha: f64, boundary_samples: usize) -> RollingReport {
    const RINGS: usize = 8;
    const SPOKES: usize = 48;
    let tol = 1e-9 * alpha.max(1.0);
    let mut report = RollingReport {
        alpha,
        boundary_samples,
        inner_violations: 0,
        outer_violations: 0,
        worst_depth: 0.0,
    };
    for (s, eta) in shape.boundary_points(boundary_samples) {
        let inner_c = s - eta.vec() * alpha;
        let outer_c = s + eta.vec() * alpha;
        for ring in 0..=RINGS {
            let rad = alpha * ring as f64 / RINGS as f64;
            let spokes = if ring == 0 { 1 } else { SPOKES };
            for k in 0..spokes {
                let d = UnitVec::from_angle(2.0 * PI * k as f64 / SPOKES as f64).vec() * rad;
                let depth_in = (-shape.signed_distance(inner_c + d)).max(0.0);
                let depth_out = shape.signed_distance(outer_c + d).max(0.0);
                if depth_in > tol {
                    report.inner_violations += 1;
                }
                if depth_out > tol {
                    report.outer_violations += 1;
                }
                report.worst_depth = report.worst_depth.max(depth_in).max(depth_out);
            }
        }
    }
    report
}

/// Density shapes supported by [`SamplingLaw`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density {
    Uniform,
    /// Density proportional to `1 + <coef, x>` on the support.
    Linear { coef: Point2 },
}

/// A distribution on a support with density bounds `δ <= f <= β`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingLaw {
    pub shape: SupportShape,
    pub density: Density,
    pub delta: f64,
    pub beta: f64,
    /// Unnormalized density maximum, used by the rejection step.
    f_max: f64,
}

const MIN_ACCEPTANCE: f64 = 1e-3;

impl SamplingLaw {
    pub fn uniform(shape: SupportShape) -> Self {
        let a = 1.0 / shape.area();
        SamplingLaw { shape, density: Density::Uniform, delta: a, beta: a, f_max: 1.0 }
    }

    pub fn linear(shape: SupportShape, coef: Point2) -> Result<Self> {
        let f_max = 1.0 + shape.support_function(coef);
        let f_min = 1.0 - shape.support_function(-coef);
        if !(f_min > 0.0) {
            return Err(Error::Config(format!(
                "density 1 + <({}, {}), x> is not bounded below by a positive constant on the support",
                coef.x, coef.y
            )));
        }
        let mass = shape.area() * (1.0 + coef.dot(shape.centroid()));
        Ok(SamplingLaw {
            delta: f_min / mass,
            beta: f_max / mass,
            shape,
            density: Density::Linear { coef },
            f_max,
        })
    }

    /// Normalized density at `x` (zero outside the support).
    pub fn density_at(&self, x: Point2) -> f64 {
        if !self.shape.contains(x) {
            return 0.0;
        }
        match self.density {
            Density::Uniform => 1.0 / self.shape.area(),
            Density::Linear { coef } => {
                let mass = self.shape.area() * (1.0 + coef.dot(self.shape.centroid()));
                (1.0 + coef.dot(x)) / mass
            }
        }
    }

    /// Probability that one bounding-box proposal is accepted.
    pub fn acceptance_rate(&self) -> f64 {
        let mean_f = match self.density {
            Density::Uniform => 1.0,
            Density::Linear { coef } => 1.0 + coef.dot(self.shape.centroid()),
        };
        self.shape.area() / self.shape.bbox().area() * mean_f / self.f_max
    }

    /// Draws `n` i.i.d. points by rejection from the bounding box.
    pub fn sample(&self, n: usize, seed: u64) -> Result<PointCloud> {
        if n == 0 {
            return precondition("sample size must be at least 1");
        }
        let acc = self.acceptance_rate();
        if !(acc >= MIN_ACCEPTANCE) {
            return Err(Error::Config(format!("rejection acceptance rate {acc:.2e} below {MIN_ACCEPTANCE}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bbox = self.shape.bbox();
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let p = bbox.sample(&mut rng);
            if !self.shape.contains(p) {
                continue;
            }
            if let Density::Linear { coef } = self.density {
                if rng.gen::<f64>() * self.f_max > 1.0 + coef.dot(p) {
                    continue;
                }
            }
            pts.push(p);
        }
        PointCloud::new(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disk() -> SupportShape {
        SupportShape::disk(Point2::ORIGIN, 1.0).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(unit_disk().contains(Point2::new(0.5, 0.0)));
        let ann = SupportShape::annulus(Point2::ORIGIN, 0.5, 1.0).unwrap();
        assert!(!ann.contains(Point2::ORIGIN));
        let st = SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.5).unwrap();
        assert!(st.contains(Point2::new(1.0, 0.49)));
        assert!(!st.contains(Point2::new(1.3, 0.49)));
    }

    #[test]
    fn boundary_distance_examples() {
        assert!((unit_disk().boundary_distance(Point2::new(0.3, 0.0)).unwrap() - 0.7).abs() < 1e-15);
        let ann = SupportShape::annulus(Point2::ORIGIN, 0.5, 1.0).unwrap();
        assert!((ann.boundary_distance(Point2::new(0.75, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        let st = SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.5).unwrap();
        assert!((st.boundary_distance(Point2::ORIGIN).unwrap() - 0.5).abs() < 1e-15);
        assert!(unit_disk().boundary_distance(Point2::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn boundary_points_have_zero_distance() {
        let shapes = [
            unit_disk(),
            SupportShape::annulus(Point2::new(1.0, 2.0), 0.5, 1.0).unwrap(),
            SupportShape::multi_disk(vec![(Point2::ORIGIN, 1.0), (Point2::new(4.0, 0.0), 1.0)]).unwrap(),
            SupportShape::stadium(Point2::new(-1.0, 0.5), Point2::new(1.0, -0.5), 0.5).unwrap(),
        ];
        for s in &shapes {
            for (p, _) in s.boundary_points(97) {
                assert!(s.signed_distance(p).abs() < 1e-12, "{} {p:?}", s.kind_name());
            }
            // interior points are strictly away from the boundary
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..200 {
                let p = s.bbox().sample(&mut rng);
                if s.signed_distance(p) > 1e-6 {
                    assert!(s.boundary_distance(p).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn areas_and_profiles() {
        let d = unit_disk();
        assert!((d.area() - PI).abs() < 1e-15);
        assert!((d.steiner_profile().eval(0.5) - 0.75 * PI).abs() < 1e-15);
        assert!((d.steiner_profile().derivative(0.3) - 2.0 * PI * 0.7).abs() < 1e-14);
        let two = SupportShape::multi_disk(vec![(Point2::ORIGIN, 1.0), (Point2::new(4.0, 0.0), 1.0)]).unwrap();
        assert!((two.area() - 2.0 * PI).abs() < 1e-14);
        for z in [0.0, 0.2, 0.7] {
            assert!((two.steiner_profile().eval(z) - 2.0 * d.steiner_profile().eval(z)).abs() < 1e-14);
        }
        assert_eq!(d.steiner_profile().eval(0.0), 0.0);
    }

    #[test]
    fn annulus_profile_matches_grid_estimate() {
        let ann = SupportShape::annulus(Point2::ORIGIN, 0.5, 1.0).unwrap();
        let prof = ann.steiner_profile();
        let m = 1500;
        let h = 2.0 / m as f64;
        for z in [0.05, 0.12, 0.2] {
            let mut count = 0usize;
            for i in 0..m {
                for j in 0..m {
                    let p = Point2::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
                    let sd = ann.signed_distance(p);
                    if sd >= 0.0 && sd <= z {
                        count += 1;
                    }
                }
            }
            let est = count as f64 * h * h;
            let exact = PI * (1.0 - (1.0 - z) * (1.0 - z)) + PI * ((0.5 + z) * (0.5 + z) - 0.25);
            assert!((prof.eval(z) - exact).abs() < 1e-12);
            assert!((est - exact).abs() / exact < 0.01, "z={z} est={est} exact={exact}");
        }
    }

    #[test]
    fn profile_is_quadratic() {
        let st = SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.5).unwrap();
        for s in [unit_disk(), st] {
            let p = s.steiner_profile();
            let a = s.alpha();
            let xs = [0.1 * a, 0.4 * a, 0.8 * a];
            let ys = xs.map(|x| p.eval(x));
            for k in 0..10 {
                let z = a * (k as f64 + 0.3) / 10.5;
                // Lagrange interpolation through the three nodes
                let mut interp = 0.0;
                for i in 0..3 {
                    let mut w = ys[i];
                    for j in 0..3 {
                        if i != j {
                            w *= (z - xs[j]) / (xs[i] - xs[j]);
                        }
                    }
                    interp += w;
                }
                assert!((interp - p.eval(z)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rolling_examples() {
        let d = unit_disk();
        assert!(verify_rolling(&d, 1.0, 200).passed());
        let r = verify_rolling(&d, 1.01, 200);
        assert!(r.inner_violations > 0 && r.worst_depth > 0.01);
        let two = SupportShape::multi_disk(vec![(Point2::ORIGIN, 1.0), (Point2::new(4.0, 0.0), 1.0)]).unwrap();
        assert_eq!(two.alpha(), 1.0);
        assert!(verify_rolling(&two, 1.0, 200).passed());
    }

    #[test]
    fn shipped_shapes_roll_at_certified_alpha() {
        let shapes = [
            unit_disk(),
            SupportShape::annulus(Point2::ORIGIN, 0.5, 1.0).unwrap(),
            SupportShape::multi_disk(vec![(Point2::ORIGIN, 1.0), (Point2::new(3.0, 1.0), 0.6)]).unwrap(),
            SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.5).unwrap(),
        ];
        for s in &shapes {
            let r = verify_rolling(s, s.alpha(), 1000);
            assert!(r.passed() && r.worst_depth < 1e-9, "{} {r:?}", s.kind_name());
        }
        let ann = &shapes[1];
        assert_eq!(ann.alpha(), 0.25);
        assert!(!verify_rolling(ann, 0.3, 200).passed());
        assert!(ann.clone().with_alpha(0.3).is_err());
        assert!(ann.clone().with_alpha(0.2).is_ok());
    }

    #[test]
    fn uniform_sampling() {
        let law = SamplingLaw::uniform(unit_disk());
        let n = 100_000;
        let cloud = law.sample(n, 42).unwrap();
        let inside = cloud.points().iter().filter(|p| p.norm() <= 0.5).count();
        let p = inside as f64 / n as f64;
        let sigma = (0.25 * 0.75 / n as f64).sqrt();
        assert!((p - 0.25).abs() <= 4.0 * sigma);
        let one = law.sample(1, 3).unwrap();
        assert_eq!(one.len(), 1);
        assert!(law.shape.contains(one.points()[0]));
        assert_eq!(law.sample(500, 9).unwrap(), law.sample(500, 9).unwrap());
        assert!((law.delta - 1.0 / PI).abs() < 1e-15 && law.delta == law.beta);
    }

    #[test]
    fn linear_density_law() {
        // density vanishing at (-1, 0) has no positive lower bound
        assert!(SamplingLaw::linear(unit_disk(), Point2::new(1.0, 0.0)).is_err());
        let law = SamplingLaw::linear(unit_disk(), Point2::new(0.5, 0.0)).unwrap();
        assert!((law.delta - 0.5 / PI).abs() < 1e-14);
        assert!((law.beta - 1.5 / PI).abs() < 1e-14);
        let n = 200_000;
        let cloud = law.sample(n, 5).unwrap();
        // histogram over 0.25 x 0.25 cells fully inside the disk
        let h = 0.25;
        let mut counts = std::collections::HashMap::new();
        for p in cloud.points() {
            let key = ((p.x / h).floor() as i32, (p.y / h).floor() as i32);
            *counts.entry(key).or_insert(0usize) += 1;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (&(i, j), &c) in &counts {
            let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
            if corners.iter().all(|&(a, b)| Point2::new(a as f64 * h, b as f64 * h).norm() <= 1.0) {
                let dens = c as f64 / (n as f64 * h * h);
                lo = lo.min(dens);
                hi = hi.max(dens);
            }
        }
        assert!(lo >= law.delta * 0.9 && hi <= law.beta * 1.1, "{lo} {hi} {} {}", law.delta, law.beta);
    }

    #[test]
    fn acceptance_guard() {
        let thin = SupportShape::multi_disk(vec![(Point2::ORIGIN, 0.001), (Point2::new(100.0, 100.0), 0.001)]).unwrap();
        assert!(matches!(SamplingLaw::uniform(thin).sample(10, 0), Err(Error::Config(_))));
    }
}

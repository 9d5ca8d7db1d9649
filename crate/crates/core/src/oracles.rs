//! Executable versions of the covering arguments behind the rate bounds:
//! unavoidable families of sectors and chord regions, the split of a probe
//! ball into a "good" cone and its complement, measure lower bounds, and the
//! lens geometry used for the matching lower bound on the disk.
//!
//! A family `U` is unavoidable at `x` if every ball `B(y, r)` with
//! `|y - x| <= r` contains some member. Containment `U ⊂ B(y, r)` is decided
//! exactly through [`Region::farthest_distance`].

use std::f64::consts::{FRAC_PI_6, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, precondition, Result};
use crate::geom::{
    angle_between, circular_segment_area, cap_region_area, cone_contains, contact_geometry, lens_area, reuleaux,
    region_area_mc, ChordRegion, ChordSide, Point2, Region, RigidMotion, Sector, UnitVec,
};
use crate::support::SupportShape;

const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;

/// Which set of cone axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionKind {
    /// Six axes at multiples of π/3.
    W,
    /// The four axes whose π/6 cones tile `{<y,e₂> >= -|y|/2}`.
    WG,
    /// The two downward axes.
    WF,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet {
    pub kind: DirectionKind,
    pub vectors: Vec<UnitVec>,
}

impl DirectionSet {
    pub fn new(kind: DirectionKind) -> Self {
        let raw: &[(f64, f64)] = match kind {
            DirectionKind::W => &[
                (1.0, 0.0),
                (0.5, HALF_SQRT3),
                (-0.5, HALF_SQRT3),
                (-1.0, 0.0),
                (-0.5, -HALF_SQRT3),
                (0.5, -HALF_SQRT3),
            ],
            DirectionKind::WG => &[(1.0, 0.0), (-1.0, 0.0), (0.5, HALF_SQRT3), (-0.5, HALF_SQRT3)],
            DirectionKind::WF => &[(-0.5, -HALF_SQRT3), (0.5, -HALF_SQRT3)],
        };
        let vectors = raw.iter().map(|&(x, y)| UnitVec::new(x, y).expect("unit axis")).collect();
        DirectionSet { kind, vectors }
    }
}

/// Constants of the lower bounds `P(U) >= L₁ r²` (interior) and
/// `P(U) >= L₂ r^{1/2} ρ^{3/2}` (near the boundary).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub delta: f64,
    pub l1: f64,
    pub lg: f64,
    pub lf: f64,
    pub l2: f64,
}

impl BoundConstants {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return domain(format!("density lower bound {delta} must be positive"));
        }
        let lg = PI / 12.0;
        let lf = 2f64.sqrt() / 6.0;
        Ok(BoundConstants { delta, l1: delta * PI / 24.0, lg, lf, l2: delta * lg.min(lf) })
    }

    /// Uniform law on `shape`: `δ = 1/μ(S)`.
    pub fn uniform(shape: &SupportShape) -> Result<Self> {
        BoundConstants::new(1.0 / shape.area())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Far,
    Near,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnavoidableFamily {
    pub anchor: Point2,
    pub r: f64,
    pub members: Vec<Region>,
    pub regime: Regime,
    /// `c` in `μ(U) >= c·r²` (far) or `μ(U ∩ S) >= c·r^{1/2}ρ^{3/2}` (near).
    pub lower_bound_constant: f64,
    /// Maps the canonical frame (anchor at 0, inward normal `e₂`) to the plane.
    pub frame: RigidMotion,
}

impl UnavoidableFamily {
    /// The same family with member `k` removed.
    pub fn without_member(&self, k: usize) -> Self {
        let mut f = self.clone();
        if k < f.members.len() {
            f.members.remove(k);
        }
        f
    }

    /// Applies a rigid motion to anchor, members and frame.
    pub fn transformed(&self, t: &RigidMotion) -> Self {
        UnavoidableFamily {
            anchor: t.apply(self.anchor),
            members: self.members.iter().map(|m| m.transformed(t)).collect(),
            frame: t.compose(&self.frame),
            ..self.clone()
        }
    }

    /// `r - min_U max_{z∈U} |z - y|`; nonnegative iff some member lies in `B̄(y, r)`.
    pub fn margin(&self, y: Point2) -> f64 {
        let best = self.members.iter().map(|m| m.farthest_distance(y)).fold(f64::INFINITY, f64::min);
        self.r - best
    }

    fn best_member(&self, y: Point2) -> Option<usize> {
        (0..self.members.len()).min_by(|&a, &b| {
            self.members[a].farthest_distance(y).total_cmp(&self.members[b].farthest_distance(y))
        })
    }
}

/// Six π/6 sectors of radius `r/2` with apex `x`, one per axis of `W`.
pub fn family_far(x: Point2, r: f64) -> Result<UnavoidableFamily> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius {r} must be positive"));
    }
    let members = DirectionSet::new(DirectionKind::W)
        .vectors
        .into_iter()
        .map(|u| Sector::pi_6(x, u, r / 2.0).map(Region::Sector))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnavoidableFamily {
        anchor: x,
        r,
        members,
        regime: Regime::Far,
        lower_bound_constant: PI / 24.0,
        frame: RigidMotion::translation(x),
    })
}

/// Four full-radius sectors on the axes of `W^G` and the two halves of the
/// chord region `𝒞(h₁)`, all carried by the motion taking `e₂` to the inward
/// normal at the projection of `x` and `0` to `x`.
pub fn family_near(x: Point2, r: f64, shape: &SupportShape) -> Result<UnavoidableFamily> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius {r} must be positive"));
    }
    let rho = shape.boundary_distance(x)?;
    if rho > r / 2.0 {
        return precondition(format!("boundary distance {rho} exceeds r/2 = {}; use the far family", r / 2.0));
    }
    if rho <= 0.0 {
        return precondition("anchor lies on the boundary");
    }
    let geo = contact_geometry(shape.alpha(), r, rho)?;
    let (_, eta) = shape.boundary_projection(x)?;
    let inward = UnitVec::new(-eta.x(), -eta.y())?;
    let frame = RigidMotion::frame(inward, x);
    let mut members = DirectionSet::new(DirectionKind::WG)
        .vectors
        .into_iter()
        .map(|u| Sector::pi_6(Point2::ORIGIN, u, r).map(|s| Region::Sector(s).transformed(&frame)))
        .collect::<Result<Vec<_>>>()?;
    for side in [ChordSide::RightHalf, ChordSide::LeftHalf] {
        members.push(Region::Chord { chord: ChordRegion::new(r, geo.h1, side)?, motion: frame });
    }
    Ok(UnavoidableFamily {
        anchor: x,
        r,
        members,
        regime: Regime::Near,
        lower_bound_constant: (PI / 12.0).min(2f64.sqrt() / 6.0),
        frame,
    })
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    /// Smallest `lhs - rhs + tol` seen, so negative exactly when something failed.
    pub worst_margin: f64,
}

impl CheckRow {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRow { name: name.into(), trials: 0, failures: 0, worst_margin: f64::INFINITY }
    }

    /// Records one trial with margin `m`, failing when `m < -tol`.
    pub fn record(&mut self, m: f64, tol: f64) -> bool {
        self.trials += 1;
        let slack = m + tol;
        self.worst_margin = self.worst_margin.min(if slack == 0.0 { 0.0 } else { slack });
        let bad = !(slack >= 0.0);
        if bad {
            self.failures += 1;
        }
        bad
    }

    pub fn merge(&mut self, other: &CheckRow) {
        self.trials += other.trials;
        self.failures += other.failures;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnavoidableReport {
    pub row: CheckRow,
    /// Up to ten probe centers whose ball contains no member.
    pub witnesses: Vec<Point2>,
    /// Sampled member points found outside the probe ball of the chosen member.
    pub dense_failures: u64,
}

/// Trials whose chosen member is also checked by dense sampling.
const DENSE_TRIALS: usize = 200;
const DENSE_POINTS: usize = 1000;

/// Uniform point of the disk `B(c, r)`.
pub fn sample_disk<R: Rng + ?Sized>(rng: &mut R, c: Point2, r: f64) -> Point2 {
    let rad = r * rng.gen::<f64>().sqrt();
    c + UnitVec::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)).vec() * rad
}

/// Probes `trials` balls `B(y, r)` with `y` uniform in `B(x, r)`.
pub fn check_unavoidable(family: &UnavoidableFamily, trials: usize, seed: u64) -> Result<UnavoidableReport> {
    if trials == 0 {
        return precondition("at least one trial is required");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = match family.regime {
        Regime::Far => "far_family_unavoidable",
        Regime::Near => "near_family_unavoidable",
    };
    let mut row = CheckRow::new(name);
    let tol = 1e-9 * family.r;
    let dense: Vec<Vec<Point2>> = family
        .members
        .iter()
        .enumerate()
        .map(|(k, m)| m.sample_points(DENSE_POINTS, seed ^ (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
        .collect();
    let mut witnesses = Vec::new();
    let mut dense_failures = 0;
    for t in 0..trials {
        let y = sample_disk(&mut rng, family.anchor, family.r);
        let m = family.margin(y);
        if row.record(m, tol) && witnesses.len() < 10 {
            witnesses.push(y);
        }
        if t < DENSE_TRIALS && m >= -tol {
            if let Some(k) = family.best_member(y) {
                let lim = family.r + tol;
                dense_failures += dense[k].iter().filter(|p| p.dist(y) > lim).count() as u64;
            }
        }
    }
    Ok(UnavoidableReport { row, witnesses, dense_failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeClass {
    G,
    F,
}

/// Whether `y` falls in the upper cone `{<z,e₂> >= -|z|/2}` of the frame with
/// origin `x` and second axis `inward_e2`.
pub fn classify_gf(y: Point2, x: Point2, r: f64, inward_e2: UnitVec) -> Result<ConeClass> {
    let z = RigidMotion::frame(inward_e2, x).apply_inverse(y);
    if z.norm() > r * (1.0 + 1e-12) {
        return domain(format!("probe center at distance {} exceeds r = {r}", z.norm()));
    }
    Ok(if z.y >= -0.5 * z.norm() - 1e-12 * r { ConeClass::G } else { ConeClass::F })
}

/// `(r, ρ)` pairs with `r` spread over `(0, α]` and `ρ` over `(0, r/2]`.
pub fn bound_grid(alpha: f64, m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m * m);
    for i in 1..=m {
        let r = alpha * i as f64 / m as f64;
        for j in 1..=m {
            out.push((r, 0.5 * r * j as f64 / m as f64));
        }
    }
    out
}

/// Area of `C_{u,τ} ∩ {x₂ >= 0}`, exact.
fn upper_sector_area(u: UnitVec, tau: f64) -> f64 {
    let c = u.vec().angle();
    let (lo, hi) = (c - FRAC_PI_6, c + FRAC_PI_6);
    let overlap = (hi.min(PI) - lo.max(0.0)).max(0.0);
    0.5 * tau * tau * overlap
}

/// Measure lower bounds near the boundary over `(r, ρ)` pairs. Sector members
/// are measured by Monte Carlo against the rolling disk `B((α-ρ)e₂, α)`;
/// chord halves use the closed form together with their inclusion in it.
pub fn check_measure_bounds(alpha: f64, grid: &[(f64, f64)], delta: f64, samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let k = BoundConstants::new(delta)?;
    let mut sector = CheckRow::new("sector_measure_bound");
    let mut chain = CheckRow::new("sector_half_disk_chain");
    let mut half_disk = CheckRow::new("half_disk_in_rolling_disk");
    let mut chord = CheckRow::new("chord_measure_bound");
    let mut ch1 = CheckRow::new("chord_area_lower_bound");
    let mut inside = CheckRow::new("chord_in_rolling_disk");
    let mut prob = CheckRow::new("near_probability_bound");
    let wg = DirectionSet::new(DirectionKind::WG).vectors;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (g, &(r, rho)) in grid.iter().enumerate() {
        if !(rho > 0.0 && rho <= r / 2.0 && r <= alpha) {
            return precondition(format!("grid point (r={r}, ρ={rho}) violates 0 < ρ <= r/2 <= α/2"));
        }
        let geo = contact_geometry(alpha, r, rho)?;
        let c = Point2::new(0.0, alpha - rho);
        let scale = r.sqrt() * rho.powf(1.5);
        let tau = geo.nu.min(r);

        // B(0,ν) ∩ {x₂ >= 0} ⊂ B(c, α): the half disk's farthest points from c are (±ν, 0).
        let far = (geo.nu * geo.nu + c.y * c.y).sqrt();
        half_disk.record(alpha - far, 1e-12 * alpha);
        for _ in 0..64 {
            let mut p = sample_disk(&mut rng, Point2::ORIGIN, geo.nu);
            p.y = p.y.abs();
            half_disk.record(alpha - p.dist(c), 1e-12 * alpha);
        }

        let rhs_g = k.lg * scale;
        for (i, &u) in wg.iter().enumerate() {
            let lower = upper_sector_area(u, tau);
            // μ(C_{u,τ} ∩ H₀) >= ½ μ(C_{u,τ}) >= (π/12) r^{1/2} ρ^{3/2}
            chain.record(lower - FRAC_PI_6 * tau * tau * 0.5, 1e-15);
            chain.record(lower - rhs_g, 1e-15);
            let s = Sector::pi_6(Point2::ORIGIN, u, r)?;
            let sub_seed = seed ^ ((g * 8 + i) as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            let (est, se) = region_area_mc(|p| s.contains(p) && p.dist(c) <= alpha, s.bbox(), samples, sub_seed)?;
            sector.record(est - rhs_g, 4.0 * se);
        }

        let full = circular_segment_area(r, geo.h1);
        ch1.record(full - 2f64.sqrt() / 3.0 * scale, 1e-15);
        chord.record(0.5 * full - k.lf * scale, 1e-15);
        let cr = ChordRegion::new(r, geo.h1, ChordSide::Full)?;
        inside.record(alpha - cr.farthest_distance(c), 1e-12 * alpha);
        let sec_min = wg.iter().map(|&u| upper_sector_area(u, tau)).fold(f64::INFINITY, f64::min);
        prob.record(delta * sec_min.min(0.5 * full) - k.l2 * scale, 1e-15);
    }
    Ok(vec![sector, chain, half_disk, chord, ch1, inside, prob])
}

/// The ball pushed just outside the disk `B(0, α)` through `x`, and its overlap with the disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskLowerBound {
    pub x_tilde: Point2,
    /// `μ(B(x̃, r) ∩ S)` as chord part plus cap part.
    pub overlap: f64,
    pub chord: f64,
    pub cap: f64,
    /// The same overlap from the two-disk lens formula.
    pub lens: f64,
}

impl DiskLowerBound {
    /// `μ(B(x̃,r) ∩ S) <= 2 μ(𝒞(h₁))`, as `2·chord - overlap`.
    pub fn bound_margin(&self) -> f64 {
        2.0 * self.chord - self.overlap
    }
}

/// For `S = B(0, α)` and `x` within `r/2` of its boundary, `x̃ = (|x| + r)·x/|x|`.
pub fn disk_lower_bound_geometry(alpha: f64, r: f64, x: Point2) -> Result<DiskLowerBound> {
    let nx = x.norm();
    if nx == 0.0 || !nx.is_finite() {
        return domain("the direction x/|x| is undefined at the origin");
    }
    let rho = alpha - nx;
    let geo = contact_geometry(alpha, r, rho)?;
    let x_tilde = x * ((nx + r) / nx);
    let chord = circular_segment_area(r, geo.h1);
    let cap = cap_region_area(alpha, geo.h2)?;
    let lens = lens_area(r, alpha, nx + r);
    Ok(DiskLowerBound { x_tilde, overlap: chord + cap, chord, cap, lens })
}

/// `x ∈ C_u^θ ⇔ φ(x, u) <= θ` on random draws, skipping near-ties.
pub fn check_cone_angle(trials: usize, seed: u64) -> CheckRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = CheckRow::new("cone_angle_equivalence");
    while (row.trials as usize) < trials {
        let u = UnitVec::from_angle(rng.gen_range(-PI..PI));
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let x = sample_disk(&mut rng, Point2::ORIGIN, 2.0);
        let Ok(phi) = angle_between(x, u.vec()) else { continue };
        if (phi - theta).abs() < 1e-9 {
            continue;
        }
        let agree = cone_contains(u, theta, x) == (phi <= theta);
        row.record((phi - theta).abs() * if agree { 1.0 } else { -1.0 }, 0.0);
    }
    row
}

/// Every pair of points of a π/6 sector of radius `r` is within `r`, and the
/// Reuleaux triangle lies within `r` of every point of the sector.
pub fn check_sector_inclusions(outer: usize, inner: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut self_row = CheckRow::new("sector_self_containment");
    let mut tri_row = CheckRow::new("reuleaux_inclusion");
    let u = UnitVec::from_angle(rng.gen_range(-PI..PI));
    let r = rng.gen_range(0.1..2.0);
    let s = Region::Sector(Sector::pi_6(Point2::ORIGIN, u, r)?);
    let t = Region::Reuleaux(reuleaux(u, r)?);
    let ys = s.sample_points(outer, rng.gen());
    let zs = s.sample_points(inner, rng.gen());
    let ws = t.sample_points(inner, rng.gen());
    let tol = 1e-12 * r;
    for y in &ys {
        let a = zs.iter().map(|z| r - z.dist(*y)).fold(f64::INFINITY, f64::min);
        self_row.record(a, tol);
        let b = ws.iter().map(|w| r - w.dist(*y)).fold(f64::INFINITY, f64::min);
        tri_row.record(b, tol);
        // the exact farthest points agree with the samples
        self_row.record(r - s.farthest_distance(*y), tol);
        tri_row.record(r - t.farthest_distance(*y), tol);
    }
    Ok(vec![self_row, tri_row])
}

/// For `y` in `Q_i ∩ F` (canonical frame), the half chord region on the same
/// side lies in `B(y, r)`.
pub fn check_half_chord_containment(alpha: f64, r: f64, rho: f64, trials: usize, seed: u64) -> Result<CheckRow> {
    let geo = contact_geometry(alpha, r, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = CheckRow::new("half_chord_in_far_cone_balls");
    let right = ChordRegion::new(r, geo.h1, ChordSide::RightHalf)?;
    let left = ChordRegion::new(r, geo.h1, ChordSide::LeftHalf)?;
    let pts_r = Region::Chord { chord: right, motion: RigidMotion::identity() }.sample_points(200, rng.gen());
    let pts_l = Region::Chord { chord: left, motion: RigidMotion::identity() }.sample_points(200, rng.gen());
    let tol = 1e-12 * r;
    while (row.trials as usize) < trials {
        let y = sample_disk(&mut rng, Point2::ORIGIN, r);
        if y.y >= -0.5 * y.norm() {
            continue;
        }
        let (c, pts) = if y.x >= 0.0 { (&right, &pts_r) } else { (&left, &pts_l) };
        let dense = pts.iter().map(|p| r - p.dist(y)).fold(f64::INFINITY, f64::min);
        row.record(dense.min(r - c.farthest_distance(y)), tol);
    }
    Ok(row)
}

/// Constants as plain arithmetic identities.
pub fn check_constants(delta: f64) -> Result<CheckRow> {
    let k = BoundConstants::new(delta)?;
    let mut row = CheckRow::new("bound_constants");
    let tol = 1e-15 * delta.max(1.0);
    row.record(-(k.l1 - delta * PI / 24.0).abs(), tol);
    row.record(-(k.l2 - delta * 2f64.sqrt() / 6.0).abs(), tol);
    row.record(k.lg - k.lf, 0.0);
    Ok(row)
}

/// `∫₀^{h} 2 sqrt(2 r y - y²) dy` by composite Simpson after `y = t²`, which
/// removes the square-root singularity at `y = 0`.
pub fn chord_area_quadrature(r: f64, h: f64) -> f64 {
    const PANELS: usize = 4000;
    let top = h.sqrt();
    let f = |t: f64| 4.0 * t * t * (2.0 * r - t * t).max(0.0).sqrt();
    let step = top / PANELS as f64;
    let mut acc = f(0.0) + f(top);
    for k in 1..PANELS {
        acc += f(k as f64 * step) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * step / 3.0
}

/// Closed-form chord areas against quadrature on an `m × m` grid of `(r, h₁)`.
pub fn check_chord_quadrature(m: usize) -> CheckRow {
    let mut row = CheckRow::new("chord_area_vs_quadrature");
    for i in 1..=m {
        let r = i as f64 / m as f64;
        for j in 1..=m {
            let h = r * j as f64 / m as f64;
            let exact = circular_segment_area(r, h);
            let rel = (exact - chord_area_quadrature(r, h)).abs() / exact;
            row.record(1e-9 - rel, 0.0);
        }
    }
    row
}

/// Residual of the contact system over `bound_grid(α, m)`.
pub fn check_contact_residual(alpha: f64, m: usize) -> Result<CheckRow> {
    let mut row = CheckRow::new("contact_geometry_residual");
    for (r, rho) in bound_grid(alpha, m) {
        row.record(1e-12 - contact_geometry(alpha, r, rho)?.residual(), 0.0);
    }
    Ok(row)
}

/// Reuleaux area against hit-or-miss Monte Carlo; margin is `4σ - |error|`.
pub fn check_reuleaux_area(samples: usize, seed: u64) -> Result<CheckRow> {
    let mut row = CheckRow::new("reuleaux_area_vs_mc");
    let t = reuleaux(UnitVec::from_angle(0.4), 0.7)?;
    let (est, se) = region_area_mc(|p| t.contains(p), t.bbox(), samples, seed)?;
    row.record(4.0 * se - (est - t.area()).abs(), 0.0);
    Ok(row)
}

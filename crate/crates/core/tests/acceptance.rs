//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rconvex::experiment::{self, ExperimentConfig, Suite, VerifyOptions};
use rconvex::geom::{contact_geometry, region_area_mc, reuleaux, UnitVec};
use rconvex::hull::{brute_hull, closing_grid};
use rconvex::metrics::{replicate_expectation, LossMethod, Metric, RRule, RateExperiment, RateResult};
use rconvex::oracles;
use rconvex::{io, Point2, PointCloud, RHull, SamplingLaw, Semantics, SupportShape};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn disk() -> SupportShape {
    SupportShape::disk(Point2::ORIGIN, 1.0).unwrap()
}

fn rate_design(metric: Metric) -> RateExperiment {
    RateExperiment {
        law: SamplingLaw::uniform(disk()),
        n_grid: vec![250, 500, 1000, 2000, 4000, 8000],
        r_rule: RRule::Fixed(0.5),
        replications: 50,
        base_seed: 20_240_601,
        metric,
        loss_method: LossMethod::Mc { samples: 100_000 },
    }
}

fn describe(res: &RateResult) -> (f64, f64, String) {
    let fit = res.fit.expect("positive means");
    let norm: Vec<f64> = res.points.iter().map(|p| p.normalized).collect();
    let spread = norm.iter().cloned().fold(f64::MIN, f64::max) / norm.iter().cloned().fold(f64::MAX, f64::min);
    let s = format!(
        "slope {:.3} [{:.3}, {:.3}], normalized {:?}",
        fit.slope,
        fit.slope_lo,
        fit.slope_hi,
        norm.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
    );
    (fit.slope, spread, s)
}

fn criterion_1() -> Outcome {
    let res = replicate_expectation(&rate_design(Metric::Loss)).unwrap();
    let (slope, spread, s) = describe(&res);
    outcome((-0.78..=-0.55).contains(&slope) && spread < 2.0, format!("{s}, spread {spread:.3}"))
}

fn criterion_2() -> Outcome {
    let res = replicate_expectation(&rate_design(Metric::Extremes)).unwrap();
    let (slope, _, s) = describe(&res);
    outcome((0.22..=0.45).contains(&slope), s)
}

fn criterion_3() -> Outcome {
    let law = SamplingLaw::uniform(disk());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut total, mut outside_band) = (0usize, 0usize, 0usize);
    let mut worst_cloud = 1.0f64;
    for k in 0..100u64 {
        let n = rng.gen_range(20..=200);
        let r = rng.gen_range(0.2..0.6);
        let cloud = law.sample(n, k).unwrap();
        let hull = RHull::new(cloud.clone(), r).unwrap();
        let boundary = hull.boundary();
        let cell = r / 50.0;
        let mask = closing_grid(cloud.points(), r, cell).unwrap();
        let b = cloud.bbox().inflate(r);
        let mut here = 0;
        for _ in 0..1000 {
            let p = Point2::new(rng.gen_range(b.min.x..b.max.x), rng.gen_range(b.min.y..b.max.y));
            let e = hull.contains(p);
            if e == mask.contains(p) {
                here += 1;
                continue;
            }
            // the lattice snaps samples by up to a cell, which moves the
            // boundary by a few cells or flips near-tie empty disks
            let near = boundary.distance(p, cloud.points()) <= 2.0 * cell;
            let by_radius = if e {
                !RHull::new(cloud.clone(), r - 2.0 * cell).unwrap().contains(p)
            } else {
                RHull::new(cloud.clone(), r + 2.0 * cell).unwrap().contains(p)
            };
            if !(near || by_radius) {
                outside_band += 1;
            }
        }
        agree += here;
        total += 1000;
        worst_cloud = worst_cloud.min(here as f64 / 1000.0);
    }
    let frac = agree as f64 / total as f64;

    let h = 3f64.sqrt() / 2.0;
    let tri = PointCloud::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)]).unwrap();
    let r = 1.0 / 3f64.sqrt();
    let c = Point2::new(0.5, h / 3.0);
    let closed = RHull::new(tri.clone(), r).unwrap();
    let open = RHull::new(tri.clone(), r).unwrap().with_semantics(Semantics::Open);
    let nudged = [1e-6, -1e-6].iter().all(|&d| !closed.contains(c + Point2::new(d, 0.0)) && !closed.contains(c + Point2::new(0.0, d)));
    let fig = closed.contains(c)
        && !open.contains(c)
        && nudged
        && tri.points().iter().all(|&p| closed.contains(p) && open.contains(p))
        && closed.extreme_indices() == open.extreme_indices()
        && brute_hull(&tri, r).unwrap().contains(c);
    outcome(
        frac >= 0.995 && outside_band == 0 && fig,
        format!(
            "agreement {:.4} overall (worst cloud {:.3}), {outside_band} disagreements outside the 2-cell band, tie triangle {}",
            frac,
            worst_cloud,
            if fig { "closed∋c, open∌c" } else { "MISMATCH" }
        ),
    )
}

fn convex_hull(pts: &[Point2]) -> Vec<Point2> {
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut lower: Vec<Point2> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn in_convex(poly: &[Point2], x: Point2, tol: f64) -> bool {
    if poly.len() < 3 {
        return poly.iter().any(|&v| v.dist(x) <= tol);
    }
    (0..poly.len()).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        (b - a).cross(x - a) >= -tol * (b - a).norm()
    })
}

fn criterion_4() -> Outcome {
    let shapes = [
        SupportShape::disk(Point2::ORIGIN, 1.0).unwrap(),
        SupportShape::annulus(Point2::ORIGIN, 0.5, 1.5).unwrap(),
        SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.6).unwrap(),
        SupportShape::multi_disk(vec![(Point2::new(-1.2, 0.0), 0.8), (Point2::new(1.2, 0.0), 0.8)]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = [0usize; 4];
    let mut probes = 0usize;
    for k in 0..50u64 {
        let shape = &shapes[k as usize % shapes.len()];
        let n = rng.gen_range(30..=600);
        let cloud = SamplingLaw::uniform(shape.clone()).sample(n, 100 + k).unwrap();
        let r1 = shape.alpha() * rng.gen_range(0.2..0.6);
        let r2 = r1 * rng.gen_range(1.1..1.6);
        let (small, large) = (RHull::new(cloud.clone(), r1).unwrap(), RHull::new(cloud.clone(), r2).unwrap());
        violations[0] += cloud.points().iter().filter(|&&p| !small.contains(p)).count();
        let conv = convex_hull(cloud.points());
        let b = cloud.bbox().inflate(0.2);
        for _ in 0..1000 {
            probes += 1;
            let p = Point2::new(rng.gen_range(b.min.x..b.max.x), rng.gen_range(b.min.y..b.max.y));
            let s = small.contains(p);
            if s && !large.contains(p) {
                violations[1] += 1;
            }
            if large.contains(p) && !in_convex(&conv, p, 1e-12) {
                violations[2] += 1;
            }
            if s && shape.signed_distance(p) < -1e-12 {
                violations[3] += 1;
            }
        }
    }
    outcome(
        violations.iter().all(|&v| v == 0),
        format!(
            "{probes} probes over 50 clouds: containment {}, monotone in r {}, inside conv {}, inside S {} violations",
            violations[0], violations[1], violations[2], violations[3]
        ),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let rows = experiment::verify(Suite::All, &VerifyOptions::default()).unwrap();
    let failures: u64 = rows.iter().map(|r| r.failures).sum();
    let sabotaged = experiment::verify(Suite::Unavoidable, &VerifyOptions { sabotage: true, ..Default::default() }).unwrap();
    let caught = sabotaged.iter().any(|r| r.failures > 0);
    let secs = t.elapsed().as_secs_f64();
    outcome(
        failures == 0 && caught && secs <= 300.0,
        format!("{} rows, {failures} failures, sabotage caught = {caught}, {secs:.1}s", rows.len()),
    )
}

fn criterion_6() -> Outcome {
    let quad = oracles::check_chord_quadrature(20);
    let mut residual = 0.0f64;
    for (r, rho) in oracles::bound_grid(1.0, 20) {
        residual = residual.max(contact_geometry(1.0, r, rho).unwrap().residual());
    }
    let t = reuleaux(UnitVec::from_angle(0.25), 1.0).unwrap();
    let (est, se) = region_area_mc(|p| t.contains(p), t.bbox(), 10_000_000, 6).unwrap();
    let z = (est - t.area()).abs() / se;
    let want = (PI - 3f64.sqrt()) / 2.0;
    outcome(
        quad.passed() && residual < 1e-12 && z < 4.0 && (t.area() - want).abs() < 1e-15,
        format!(
            "chord quadrature worst slack {:.2e} over {} cells, contact residual {residual:.1e}, Reuleaux |z| = {z:.2}",
            quad.worst_margin, quad.trials
        ),
    )
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "shape.kind = disk\nshape.params = 0,0,1\nexperiment.n_grid = 200,400,800\nexperiment.r_rule = pow:0.8,0.1\n\
         experiment.replications = 4\nexperiment.seed = 77\nexperiment.loss = mc:5000\noutput.dir = {}\n",
        dir.path().display()
    );
    let cfg = ExperimentConfig::parse(&text, "c.cfg".as_ref()).unwrap();
    let run = || {
        experiment::simulate(&cfg).unwrap();
        (
            std::fs::read(dir.path().join("results.csv")).unwrap(),
            std::fs::read(dir.path().join("fit.csv")).unwrap(),
        )
    };
    let (a, b) = (run(), run());
    let o = VerifyOptions { trials: 2000, anchors: 10, reuleaux_samples: 100_000, seed: 5, ..Default::default() };
    let v1 = io::verify_csv(&experiment::verify(Suite::All, &o).unwrap());
    let v2 = io::verify_csv(&experiment::verify(Suite::All, &o).unwrap());
    let same = a == b && v1 == v2;
    outcome(same, format!("simulate results/fit and verify CSVs identical across reruns: {same}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 loss rate", criterion_1),
        ("2 extreme-point rate", criterion_2),
        ("3 exact vs raster closing", criterion_3),
        ("4 hull invariants", criterion_4),
        ("5 proof-oracle suite", criterion_5),
        ("6 closed-form cross-checks", criterion_6),
        ("7 determinism", criterion_7),
    ];
    // `cargo test --test acceptance -- 3 5` runs a subset
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.split(' ').next() == Some(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        println!(
            "{} criterion {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Configuration files and the work behind each command-line subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Point2, Rotation, RigidMotion};
use crate::hull::{closing_grid, BruteHull, PointCloud, RHull, Semantics};
use crate::io;
use crate::metrics::{replicate_expectation, LossMethod, Metric, RRule, RateExperiment, RateResult};
use crate::oracles::{self, CheckRow};
use crate::support::{SamplingLaw, SupportShape};

/// Flat `key = value` configuration with `#` comments.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: RateExperiment,
    pub output_dir: PathBuf,
}

const KEYS: &[&str] = &[
    "shape.kind",
    "shape.params",
    "shape.alpha",
    "law.kind",
    "law.coef",
    "experiment.n_grid",
    "experiment.r_rule",
    "experiment.replications",
    "experiment.seed",
    "experiment.metric",
    "experiment.loss",
    "output.dir",
];

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn numbers(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| config_err(format!("{key}: `{t}` is not a number"))))
        .collect()
}

fn parse_shape(kind: &str, params: &str) -> Result<SupportShape> {
    let arity = |v: &[f64], k: usize| {
        if v.len() == k {
            Ok(())
        } else {
            Err(config_err(format!("shape.params for {kind} needs {k} numbers, got {}", v.len())))
        }
    };
    let shape = match kind {
        "disk" => {
            let v = numbers("shape.params", params)?;
            arity(&v, 3)?;
            SupportShape::disk(Point2::new(v[0], v[1]), v[2])
        }
        "annulus" => {
            let v = numbers("shape.params", params)?;
            arity(&v, 4)?;
            SupportShape::annulus(Point2::new(v[0], v[1]), v[2], v[3])
        }
        "stadium" => {
            let v = numbers("shape.params", params)?;
            arity(&v, 5)?;
            SupportShape::stadium(Point2::new(v[0], v[1]), Point2::new(v[2], v[3]), v[4])
        }
        "multi_disk" => {
            let disks = params
                .split(';')
                .map(|d| {
                    let v = numbers("shape.params", d)?;
                    arity(&v, 3)?;
                    Ok((Point2::new(v[0], v[1]), v[2]))
                })
                .collect::<Result<Vec<_>>>()?;
            SupportShape::multi_disk(disks)
        }
        other => return Err(config_err(format!("unknown shape.kind `{other}`"))),
    };
    shape.map_err(|e| config_err(format!("shape: {e}")))
}

impl ExperimentConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { path: path.to_path_buf(), line: k + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| perr("expected key = value".into()))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(perr(format!("unknown key `{key}`")));
            }
            if kv.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(perr(format!("duplicate key `{key}`")));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let need = |k: &str| get(k).ok_or_else(|| config_err(format!("missing key `{k}`")));

        let mut shape = parse_shape(need("shape.kind")?, need("shape.params")?)?;
        if let Some(a) = get("shape.alpha") {
            let a = a.parse::<f64>().map_err(|_| config_err(format!("shape.alpha: `{a}` is not a number")))?;
            shape = shape.with_alpha(a).map_err(|e| config_err(format!("shape.alpha: {e}")))?;
        }
        let law = match get("law.kind").unwrap_or("uniform") {
            "uniform" => SamplingLaw::uniform(shape),
            "linear" => {
                let c = numbers("law.coef", need("law.coef")?)?;
                if c.len() != 2 {
                    return Err(config_err("law.coef needs two numbers"));
                }
                SamplingLaw::linear(shape, Point2::new(c[0], c[1]))?
            }
            other => return Err(config_err(format!("unknown law.kind `{other}`"))),
        };
        let n_grid = need("experiment.n_grid")?
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| config_err(format!("experiment.n_grid: `{t}` is not a count")))
            })
            .collect::<Result<Vec<_>>>()?;
        let r_rule = RRule::from_str(need("experiment.r_rule")?)?;
        let replications = get("experiment.replications")
            .unwrap_or("20")
            .parse::<usize>()
            .map_err(|_| config_err("experiment.replications must be a count"))?;
        let base_seed = get("experiment.seed")
            .unwrap_or("0")
            .parse::<u64>()
            .map_err(|_| config_err("experiment.seed must be a nonnegative integer"))?;
        let metric = Metric::from_str(get("experiment.metric").unwrap_or("loss"))?;
        let loss_method = match get("experiment.loss") {
            None => LossMethod::default(),
            Some(v) => parse_loss_method(v)?,
        };
        let experiment = RateExperiment { law, n_grid, r_rule, replications, base_seed, metric, loss_method };
        experiment.validate()?;
        let output_dir = PathBuf::from(get("output.dir").unwrap_or("."));
        Ok(ExperimentConfig { experiment, output_dir })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }
}

fn parse_loss_method(v: &str) -> Result<LossMethod> {
    let bad = || config_err(format!("experiment.loss: expected mc:<samples> or grid:<cell>, got `{v}`"));
    let (kind, arg) = v.split_once(':').ok_or_else(bad)?;
    match kind.trim() {
        "mc" => Ok(LossMethod::Mc { samples: arg.trim().parse().map_err(|_| bad())? }),
        "grid" => {
            let cell: f64 = arg.trim().parse().map_err(|_| bad())?;
            if !(cell > 0.0) {
                return Err(bad());
            }
            Ok(LossMethod::Grid { cell })
        }
        _ => Err(bad()),
    }
}

pub struct SimulationOutput {
    pub result: RateResult,
    pub results_csv: String,
    pub fit_csv: String,
}

/// Runs the experiment and writes `results.csv` and `fit.csv` to `output.dir`.
pub fn simulate(cfg: &ExperimentConfig) -> Result<SimulationOutput> {
    let result = replicate_expectation(&cfg.experiment)?;
    let results_csv = io::results_csv(&result);
    let fit_csv = io::fit_csv(result.fit.as_ref());
    io::write_file(&cfg.output_dir.join("results.csv"), results_csv.as_bytes())?;
    io::write_file(&cfg.output_dir.join("fit.csv"), fit_csv.as_bytes())?;
    Ok(SimulationOutput { result, results_csv, fit_csv })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Unavoidable,
    Bounds,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometry" => Ok(Suite::Geometry),
            "unavoidable" => Ok(Suite::Unavoidable),
            "bounds" => Ok(Suite::Bounds),
            "all" => Ok(Suite::All),
            _ => Err(config_err(format!("unknown suite `{s}` (geometry, unavoidable, bounds, all)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Probe balls per anchor, and cases for the cone-angle check.
    pub trials: usize,
    pub anchors: usize,
    /// Side of the `(r, ρ)` grids.
    pub grid: usize,
    pub mc_samples: usize,
    pub reuleaux_samples: usize,
    pub seed: u64,
    /// Drops one sector from every far family, which must then fail.
    pub sabotage: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 10_000,
            anchors: 100,
            grid: 20,
            mc_samples: 20_000,
            reuleaux_samples: 10_000_000,
            seed: 1,
            sabotage: false,
        }
    }
}

fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag.wrapping_mul(0xd1b5_4a32_d192_ed03)
}

fn geometry_rows(o: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = vec![oracles::check_cone_angle(o.trials, sub_seed(o.seed, 1))];
    rows.extend(oracles::check_sector_inclusions(1000, 1000, sub_seed(o.seed, 2))?);
    rows.push(oracles::check_chord_quadrature(o.grid));
    rows.push(oracles::check_contact_residual(1.0, o.grid)?);
    rows.push(oracles::check_reuleaux_area(o.reuleaux_samples, sub_seed(o.seed, 3))?);
    rows.push(oracles::check_constants(1.0 / std::f64::consts::PI)?);
    let mut half = CheckRow::new("half_chord_in_far_cone_balls");
    for (k, (r, rho)) in oracles::bound_grid(1.0, 4).into_iter().enumerate() {
        half.merge(&oracles::check_half_chord_containment(1.0, r, rho, o.trials / 16 + 1, sub_seed(o.seed, 100 + k as u64))?);
    }
    rows.push(half);
    Ok(rows)
}

fn random_motion(rng: &mut ChaCha8Rng) -> RigidMotion {
    let m = RigidMotion::from_rotation(
        Rotation::new(rng.gen_range(-3.2..3.2)),
        Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
    );
    if rng.gen::<bool>() {
        m.compose(&RigidMotion::reflect_vertical_axis())
    } else {
        m
    }
}

fn unavoidable_rows(o: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let disk = SupportShape::disk(Point2::ORIGIN, 1.0)?;
    let r = 0.5;
    let anchors: Vec<(Point2, Point2, f64)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(o.seed, 10));
        (0..o.anchors)
            .map(|_| {
                let far = oracles::sample_disk(&mut rng, Point2::ORIGIN, 1.0 - r / 2.0);
                let rho = rng.gen_range(1e-3..=r / 2.0);
                let dir = crate::geom::UnitVec::from_angle(rng.gen_range(-3.2..3.2));
                (far, dir.vec() * (1.0 - rho), rng.gen_range(0.05..1.0))
            })
            .collect()
    };
    let per_anchor = anchors
        .par_iter()
        .enumerate()
        .map(|(k, &(far_x, near_x, r_far))| -> Result<[CheckRow; 4]> {
            let seed = sub_seed(o.seed, 1000 + k as u64);
            let mut far = oracles::family_far(far_x, r_far)?;
            if o.sabotage {
                far = far.without_member(k % 6);
            }
            let far_rep = oracles::check_unavoidable(&far, o.trials, seed)?;
            let near = oracles::family_near(near_x, r, &disk)?;
            let near_rep = oracles::check_unavoidable(&near, o.trials, seed ^ 1)?;
            let mut dense = CheckRow::new("member_dense_sampling");
            dense.record(0.0 - (far_rep.dense_failures + near_rep.dense_failures) as f64, 0.0);

            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
            let t = random_motion(&mut rng);
            let moved = near.transformed(&t);
            let mut inv = CheckRow::new("rigid_motion_invariance");
            for _ in 0..100 {
                let y = oracles::sample_disk(&mut rng, near.anchor, r);
                let (a, b) = (near.margin(y), moved.margin(t.apply(y)));
                inv.record(1e-9 * r - (a - b).abs(), 0.0);
            }
            Ok([far_rep.row, near_rep.row, dense, inv])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<CheckRow> = ["far_family_unavoidable", "near_family_unavoidable", "member_dense_sampling", "rigid_motion_invariance"]
        .iter()
        .map(|n| CheckRow::new(*n))
        .collect();
    for set in &per_anchor {
        for (acc, row) in rows.iter_mut().zip(set) {
            acc.merge(row);
        }
    }
    // a family missing one sector must be caught
    let mut control = CheckRow::new("dropped_sector_detected");
    let broken = oracles::family_far(Point2::ORIGIN, r)?.without_member(0);
    let caught = oracles::check_unavoidable(&broken, o.trials, sub_seed(o.seed, 11))?.row.failures;
    control.record(caught as f64 - 0.5, 0.0);
    rows.push(control);
    Ok(rows)
}

fn bound_rows(o: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let grid = oracles::bound_grid(1.0, o.grid);
    let mut rows = oracles::check_measure_bounds(1.0, &grid, 1.0 / std::f64::consts::PI, o.mc_samples, sub_seed(o.seed, 20))?;
    let mut overlap = CheckRow::new("disk_overlap_bound");
    let mut lens = CheckRow::new("disk_overlap_matches_lens");
    for (k, &(r, rho)) in grid.iter().enumerate() {
        let dir = crate::geom::UnitVec::from_angle(0.37 * k as f64);
        let g = oracles::disk_lower_bound_geometry(1.0, r, dir.vec() * (1.0 - rho))?;
        overlap.record(g.bound_margin(), 1e-15);
        lens.record(-(g.overlap - g.lens).abs(), 1e-12);
    }
    rows.push(overlap);
    rows.push(lens);
    Ok(rows)
}

/// All rows of a suite, in a fixed order.
pub fn verify(suite: Suite, o: &VerifyOptions) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    if matches!(suite, Suite::Geometry | Suite::All) {
        rows.extend(geometry_rows(o)?);
    }
    if matches!(suite, Suite::Unavoidable | Suite::All) {
        rows.extend(unavoidable_rows(o)?);
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        rows.extend(bound_rows(o)?);
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    Exact,
    Grid,
    Brute,
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EngineKind::Exact),
            "grid" => Ok(EngineKind::Grid),
            "brute" => Ok(EngineKind::Brute),
            _ => Err(config_err(format!("unknown engine `{s}` (exact, grid, brute)"))),
        }
    }
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Exact => "exact",
            EngineKind::Grid => "grid",
            EngineKind::Brute => "brute",
        }
    }
}

/// Largest sample the brute-force engine is benchmarked on.
pub const BRUTE_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub engine: EngineKind,
    pub n: usize,
    pub probes: usize,
    pub build_seconds: f64,
    pub query_seconds: f64,
    /// Fraction of probes on which this engine agrees with the exact one.
    pub agreement: f64,
    pub skipped: bool,
}

pub const BENCH_HEADER: &str = "engine,n,r,probes,build_seconds,query_seconds,agreement";

pub fn bench_csv(rows: &[BenchRow], r: f64) -> String {
    let mut s = format!("{BENCH_HEADER}\n");
    for b in rows.iter().filter(|b| !b.skipped) {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            b.engine.name(),
            b.n,
            r,
            b.probes,
            b.build_seconds,
            b.query_seconds,
            b.agreement
        ));
    }
    s
}

/// Times each engine on uniform samples of the unit disk. The grid engine
/// uses cells of `r / 50`.
pub fn bench(n_list: &[usize], r: f64, engines: &[EngineKind], probes: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let disk = SupportShape::disk(Point2::ORIGIN, 1.0)?;
    let law = SamplingLaw::uniform(disk.clone());
    let mut out = Vec::new();
    for &n in n_list {
        let cloud = law.sample(n, sub_seed(seed, n as u64))?;
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, !(n as u64)));
        let box_ = disk.bbox().inflate(0.1);
        let qs: Vec<Point2> = (0..probes).map(|_| box_.sample(&mut rng)).collect();
        let t = Instant::now();
        let exact = RHull::new(cloud.clone(), r)?;
        let exact_build = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let reference: Vec<bool> = qs.iter().map(|&q| exact.contains(q)).collect();
        let exact_query = t.elapsed().as_secs_f64();
        let agree = |v: &[bool]| v.iter().zip(&reference).filter(|(a, b)| a == b).count() as f64 / probes.max(1) as f64;
        for &e in engines {
            let row = match e {
                EngineKind::Exact => BenchRow {
                    engine: e,
                    n,
                    probes,
                    build_seconds: exact_build,
                    query_seconds: exact_query,
                    agreement: 1.0,
                    skipped: false,
                },
                EngineKind::Grid => {
                    let t = Instant::now();
                    let mask = closing_grid(cloud.points(), r, r / 50.0)?;
                    let build = t.elapsed().as_secs_f64();
                    let t = Instant::now();
                    let v: Vec<bool> = qs.iter().map(|&q| mask.contains(q)).collect();
                    BenchRow { engine: e, n, probes, build_seconds: build, query_seconds: t.elapsed().as_secs_f64(), agreement: agree(&v), skipped: false }
                }
                EngineKind::Brute if n > BRUTE_CAP => BenchRow {
                    engine: e,
                    n,
                    probes,
                    build_seconds: 0.0,
                    query_seconds: 0.0,
                    agreement: f64::NAN,
                    skipped: true,
                },
                EngineKind::Brute => {
                    let t = Instant::now();
                    let b = BruteHull::build(cloud.points(), r);
                    let build = t.elapsed().as_secs_f64();
                    let t = Instant::now();
                    let v: Vec<bool> = qs.iter().map(|&q| b.contains(q)).collect();
                    BenchRow { engine: e, n, probes, build_seconds: build, query_seconds: t.elapsed().as_secs_f64(), agreement: agree(&v), skipped: false }
                }
            };
            out.push(row);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct HullOptions {
    pub r: f64,
    pub semantics: Semantics,
    pub arcs_svg: Option<PathBuf>,
    pub mask_pgm: Option<PathBuf>,
    /// Grid cell for the raster area and mask; defaults to `r / 50`.
    pub cell_size: Option<f64>,
    pub probes: Vec<Point2>,
}

#[derive(Clone, Debug)]
pub struct HullSummary {
    pub n: usize,
    pub r: f64,
    pub extremes: Vec<usize>,
    pub arc_area: f64,
    /// `None` if the raster would exceed its cell cap.
    pub grid_area: Option<f64>,
    pub exact_seconds: f64,
    pub grid_seconds: f64,
    pub probes: Vec<(Point2, bool)>,
}

impl HullSummary {
    pub fn line(&self) -> String {
        let grid = self.grid_area.map_or("n/a".to_string(), |a| format!("{a:.6}"));
        format!(
            "n={} r={} extremes={} area_arc={:.6} area_grid={} exact_s={:.3} grid_s={:.3}",
            self.n,
            self.r,
            self.extremes.len(),
            self.arc_area,
            grid,
            self.exact_seconds,
            self.grid_seconds
        )
    }
}

pub fn run_hull(cloud: PointCloud, o: &HullOptions) -> Result<HullSummary> {
    let n = cloud.len();
    let t = Instant::now();
    let hull = RHull::new(cloud, o.r)?.with_semantics(o.semantics);
    let extremes = hull.extreme_indices();
    let boundary = hull.boundary();
    let probes = o.probes.iter().map(|&p| (p, hull.contains(p))).collect();
    let exact_seconds = t.elapsed().as_secs_f64();
    if let Some(path) = &o.arcs_svg {
        io::write_file(path, io::boundary_svg(&boundary, hull.cloud().points()).as_bytes())?;
    }
    let cell = o.cell_size.unwrap_or(o.r / 50.0);
    let t = Instant::now();
    let mask = match closing_grid(hull.cloud().points(), o.r, cell) {
        Ok(m) => Some(m),
        Err(Error::Resource(_)) if o.mask_pgm.is_none() => None,
        Err(e) => return Err(e),
    };
    let grid_seconds = t.elapsed().as_secs_f64();
    if let (Some(path), Some(m)) = (&o.mask_pgm, &mask) {
        io::write_file(path, &m.to_pgm())?;
    }
    Ok(HullSummary {
        n,
        r: o.r,
        extremes,
        arc_area: boundary.area(),
        grid_area: mask.map(|m| m.area()),
        exact_seconds,
        grid_seconds,
        probes,
    })
}

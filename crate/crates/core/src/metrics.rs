//! Loss `d_μ(S, S_n) = μ(S \ S_n)`, extreme-point counts, and replicated
//! rate experiments with log-log slope fits.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{domain, precondition, Error, Result};
use crate::geom::Point2;
use crate::hull::RHull;
use crate::support::{SamplingLaw, SupportShape};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LossMethod {
    /// Cell-center quadrature on a square lattice with the given cell size.
    Grid { cell: f64 },
    /// Hit-or-miss with this many uniform probes in `S`.
    Mc { samples: usize },
}

impl Default for LossMethod {
    fn default() -> Self {
        LossMethod::Mc { samples: 100_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossEstimate {
    pub value: f64,
    /// Binomial standard error for `Mc`; `cell · perimeter(S)` for `Grid`.
    pub std_error: f64,
    pub method: LossMethod,
}

/// Band outside `S` where a probe may still be reported inside the hull
/// without breaking `S_n ⊆ S` (boundary roundoff).
const ONE_SIDED_BAND: f64 = 1e-9;

/// `μ(S \ S_n)` for a hull built from a sample of `shape`.
pub fn dist_in_measure(shape: &SupportShape, hull: &RHull, method: LossMethod, seed: u64) -> Result<LossEstimate> {
    let scale = shape.bbox().width().max(shape.bbox().height());
    if let Some(i) = hull.cloud().points().iter().position(|&p| shape.signed_distance(p) < -ONE_SIDED_BAND * scale) {
        return Err(Error::Contract(format!("sample point {i} lies outside the support")));
    }
    match method {
        LossMethod::Mc { samples } => {
            if samples == 0 {
                return precondition("loss estimate needs at least one probe");
            }
            let bbox = shape.bbox();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut inside, mut missed) = (0usize, 0usize);
            while inside < samples {
                let p = bbox.sample(&mut rng);
                if shape.contains(p) {
                    inside += 1;
                    if !hull.contains(p) {
                        missed += 1;
                    }
                } else if shape.signed_distance(p) < -ONE_SIDED_BAND * scale && hull.contains(p) {
                    return Err(Error::Contract(format!("hull point ({}, {}) lies outside the support", p.x, p.y)));
                }
            }
            let frac = missed as f64 / samples as f64;
            let area = shape.area();
            Ok(LossEstimate {
                value: frac * area,
                std_error: area * (frac * (1.0 - frac) / samples as f64).sqrt(),
                method,
            })
        }
        LossMethod::Grid { cell } => {
            if !(cell > 0.0) {
                return domain(format!("cell size {cell} must be positive"));
            }
            let b = shape.bbox().inflate(2.0 * cell);
            let nx = (b.width() / cell).ceil() as usize;
            let ny = (b.height() / cell).ceil() as usize;
            if (nx as u64).saturating_mul(ny as u64) > crate::hull::MAX_CELLS {
                return Err(Error::Resource(format!("loss grid of {nx}x{ny} cells is too large")));
            }
            let x0 = (b.min.x / cell).floor() * cell;
            let y0 = (b.min.y / cell).floor() * cell;
            let mut missed = 0usize;
            for j in 0..ny {
                for i in 0..nx {
                    let p = Point2::new(x0 + (i as f64 + 0.5) * cell, y0 + (j as f64 + 0.5) * cell);
                    let sd = shape.signed_distance(p);
                    if sd >= 0.0 {
                        if !hull.contains(p) {
                            missed += 1;
                        }
                    } else if sd < -2.0 * cell && hull.contains(p) {
                        return Err(Error::Contract(format!("hull point ({}, {}) lies outside the support", p.x, p.y)));
                    }
                }
            }
            Ok(LossEstimate {
                value: missed as f64 * cell * cell,
                std_error: cell * shape.perimeter(),
                method,
            })
        }
    }
}

/// Number of sample points on the hull boundary.
pub fn count_extremes(hull: &RHull) -> usize {
    hull.extreme_indices().len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Loss,
    Extremes,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Loss => "loss",
            Metric::Extremes => "extremes",
        }
    }

    /// `r^{1/3} n^{2/3}` for loss and `r^{1/3} n^{-1/3}` for extremes: the
    /// factor that makes the predicted rate flat in `n`.
    pub fn normalizer(self, n: usize, r: f64) -> f64 {
        let n = n as f64;
        match self {
            Metric::Loss => r.cbrt() * n.powf(2.0 / 3.0),
            Metric::Extremes => r.cbrt() * n.powf(-1.0 / 3.0),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loss" => Ok(Metric::Loss),
            "extremes" => Ok(Metric::Extremes),
            _ => Err(Error::Config(format!("unknown metric `{s}` (expected loss or extremes)"))),
        }
    }
}

/// How the radius depends on the sample size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RRule {
    Fixed(f64),
    /// `r = c · n^{-γ}` with `0 <= γ < 1/2`.
    Pow { c: f64, gamma: f64 },
}

impl RRule {
    pub fn radius(&self, n: usize) -> f64 {
        match *self {
            RRule::Fixed(v) => v,
            RRule::Pow { c, gamma } => c * (n as f64).powf(-gamma),
        }
    }
}

impl FromStr for RRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("invalid r_rule `{s}`: {why}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("expected a number"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected fixed:v or pow:c,gamma"))?;
        match kind.trim() {
            "fixed" => {
                let v = num(rest)?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(bad("radius must be positive"));
                }
                Ok(RRule::Fixed(v))
            }
            "pow" => {
                let (c, g) = rest.split_once(',').ok_or_else(|| bad("expected pow:c,gamma"))?;
                let (c, gamma) = (num(c)?, num(g)?);
                if !(c > 0.0 && c.is_finite()) {
                    return Err(bad("c must be positive"));
                }
                if !(0.0..0.5).contains(&gamma) {
                    return Err(bad("gamma must lie in [0, 1/2) so that n r²/log n diverges"));
                }
                Ok(RRule::Pow { c, gamma })
            }
            other => Err(bad(&format!("unknown kind `{other}`"))),
        }
    }
}

impl fmt::Display for RRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RRule::Fixed(v) => write!(f, "fixed:{v}"),
            RRule::Pow { c, gamma } => write!(f, "pow:{c},{gamma}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateExperiment {
    pub law: SamplingLaw,
    pub n_grid: Vec<usize>,
    pub r_rule: RRule,
    pub replications: usize,
    pub base_seed: u64,
    pub metric: Metric,
    pub loss_method: LossMethod,
}

impl RateExperiment {
    pub fn shape(&self) -> &SupportShape {
        &self.law.shape
    }

    /// Rejects designs whose radius exceeds `α` or that cannot produce a CI.
    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::Config(format!("need at least 2 replications, got {}", self.replications)));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return Err(Error::Config("n_grid must list positive sample sizes".into()));
        }
        let alpha = self.shape().alpha();
        for &n in &self.n_grid {
            let r = self.r_rule.radius(n);
            if r > alpha {
                return Err(Error::Config(format!("r_rule gives r = {r} > α = {alpha} at n = {n}")));
            }
        }
        Ok(())
    }
}

/// Seed of replicate `rep` at sample size `n`, independent of scheduling.
pub fn replicate_seed(base: u64, n: usize, rep: usize) -> u64 {
    let mut z = base ^ splitmix(n as u64) ^ splitmix((rep as u64) ^ 0xa076_1d64_78bd_642f);
    z = splitmix(z);
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub r: f64,
    pub replications: usize,
    pub mean: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub normalized: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_lo: f64,
    pub slope_hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateResult {
    pub metric: Metric,
    pub points: Vec<RatePoint>,
    /// `None` when fewer than three sizes or a zero mean make the fit undefined.
    pub fit: Option<RateFit>,
}

/// One replicate's metric value.
pub fn replicate_value(exp: &RateExperiment, n: usize, rep: usize) -> Result<f64> {
    let seed = replicate_seed(exp.base_seed, n, rep);
    let cloud = exp.law.sample(n, seed)?;
    let hull = RHull::new(cloud, exp.r_rule.radius(n))?;
    match exp.metric {
        Metric::Loss => Ok(dist_in_measure(exp.shape(), &hull, exp.loss_method, splitmix(seed))?.value),
        Metric::Extremes => Ok(count_extremes(&hull) as f64),
    }
}

/// Two-sided 95% Student-t quantile with `dof` degrees of freedom.
fn t95(dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64).map(|t| t.inverse_cdf(0.975)).unwrap_or(f64::NAN)
}

/// Mean of `values` by pairwise summation, so the result does not depend on
/// how replicates were scheduled.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Runs every replicate and summarizes each sample size.
pub fn replicate_expectation(exp: &RateExperiment) -> Result<RateResult> {
    exp.validate()?;
    let mut points = Vec::with_capacity(exp.n_grid.len());
    for &n in &exp.n_grid {
        let values = (0..exp.replications)
            .into_par_iter()
            .map(|rep| replicate_value(exp, n, rep))
            .collect::<Result<Vec<f64>>>()?;
        let k = values.len() as f64;
        let mean = pairwise_sum(&values) / k;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let sd = (pairwise_sum(&dev) / (k - 1.0)).sqrt();
        let stderr = sd / k.sqrt();
        let half = t95(values.len() - 1) * stderr;
        let r = exp.r_rule.radius(n);
        points.push(RatePoint {
            n,
            r,
            replications: values.len(),
            mean,
            stderr,
            ci_lo: mean - half,
            ci_hi: mean + half,
            normalized: exp.metric.normalizer(n, r) * mean,
        });
    }
    let ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    let means: Vec<f64> = points.iter().map(|p| p.mean).collect();
    let fit = fit_rate(&ns, &means).ok();
    Ok(RateResult { metric: exp.metric, points, fit })
}

/// Ordinary least squares of `ln mean` on `ln n` with a 95% t interval for the slope.
pub fn fit_rate(ns: &[usize], means: &[f64]) -> Result<RateFit> {
    if ns.len() != means.len() {
        return precondition("sizes and means differ in length");
    }
    if ns.len() < 3 {
        return precondition("a rate fit needs at least three points");
    }
    if let Some(m) = means.iter().find(|m| !(**m > 0.0)) {
        return domain(format!("mean {m} is not positive; its logarithm is undefined"));
    }
    if ns.contains(&0) {
        return domain("sample sizes must be positive");
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return domain("sample sizes must not all be equal");
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = (sse / (k - 2.0) / sxx).sqrt();
    let half = t95(x.len() - 2) * se;
    Ok(RateFit { slope, intercept, slope_lo: slope - half, slope_hi: slope + half })
}

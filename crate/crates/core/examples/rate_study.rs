//! Replicated loss and extreme-point rates for the uniform law on the unit disk.
//!
//! `cargo run --release --example rate_study -- [replications]`

use rconvex::metrics::{replicate_expectation, LossMethod, Metric, RRule, RateExperiment};
use rconvex::{Point2, SamplingLaw, SupportShape};

fn main() -> rconvex::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let law = SamplingLaw::uniform(SupportShape::disk(Point2::ORIGIN, 1.0)?);
    for metric in [Metric::Loss, Metric::Extremes] {
        let exp = RateExperiment {
            law: law.clone(),
            n_grid: vec![250, 500, 1000, 2000, 4000, 8000],
            r_rule: RRule::Fixed(0.5),
            replications: reps,
            base_seed: 2024,
            metric,
            loss_method: LossMethod::Mc { samples: 100_000 },
        };
        let t = std::time::Instant::now();
        let res = replicate_expectation(&exp)?;
        println!("{} ({:.1?})", metric.name(), t.elapsed());
        for p in &res.points {
            println!("  n={:5}  mean={:.5e}  se={:.2e}  normalized={:.4}", p.n, p.mean, p.stderr, p.normalized);
        }
        if let Some(f) = res.fit {
            println!("  slope {:.3} [{:.3}, {:.3}]", f.slope, f.slope_lo, f.slope_hi);
        }
    }
    Ok(())
}

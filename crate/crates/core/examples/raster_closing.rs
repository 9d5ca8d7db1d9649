//! The discrete closing on a lattice against the exact membership test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rconvex::hull::closing_grid;
use rconvex::{Point2, RHull, SamplingLaw, SupportShape};

fn main() -> rconvex::Result<()> {
    let shape = SupportShape::annulus(Point2::ORIGIN, 0.4, 1.0)?;
    let cloud = SamplingLaw::uniform(shape).sample(150, 3)?;
    let r = 0.3;
    let cell = r / 50.0;
    let hull = RHull::new(cloud.clone(), r)?;
    let mask = closing_grid(cloud.points(), r, cell)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let box_ = cloud.bbox().inflate(0.2);
    let probes = 20_000;
    let mut agree = 0;
    for _ in 0..probes {
        let p = Point2::new(rng.gen_range(box_.min.x..box_.max.x), rng.gen_range(box_.min.y..box_.max.y));
        agree += usize::from(hull.contains(p) == mask.contains(p));
    }
    println!("grid {}x{} cells of {cell}", mask.width(), mask.height());
    println!("area: arcs {:.5}, grid {:.5}", hull.area(), mask.area());
    println!("agreement {:.3}%", 100.0 * agree as f64 / probes as f64);
    Ok(())
}

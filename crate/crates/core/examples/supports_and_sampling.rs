//! The support catalogue: certified rolling radius, Steiner profile and a
//! linear-density sample.

use rconvex::support::verify_rolling;
use rconvex::{Point2, SamplingLaw, SupportShape};

fn main() -> rconvex::Result<()> {
    let shapes = [
        SupportShape::disk(Point2::ORIGIN, 1.0)?,
        SupportShape::annulus(Point2::ORIGIN, 0.5, 1.5)?,
        SupportShape::multi_disk(vec![(Point2::new(-1.5, 0.0), 1.0), (Point2::new(1.5, 0.0), 0.8)])?,
        SupportShape::stadium(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0.6)?,
    ];
    for s in &shapes {
        let roll = verify_rolling(s, s.alpha(), 256);
        let prof = s.steiner_profile();
        println!(
            "{:>10}: α={:.3} area={:.4} perimeter={:.4} rolling ok={} F(z)={:?}",
            s.kind_name(),
            s.alpha(),
            s.area(),
            s.perimeter(),
            roll.passed(),
            prof.coefficients
        );
    }
    let law = SamplingLaw::linear(shapes[0].clone(), Point2::new(0.5, 0.0))?;
    let cloud = law.sample(10_000, 2)?;
    let right = cloud.points().iter().filter(|p| p.x > 0.0).count();
    println!("density 1 + x/2 on the disk: δ={:.4} β={:.4}, {right} of 10000 points with x > 0", law.delta, law.beta);
    Ok(())
}

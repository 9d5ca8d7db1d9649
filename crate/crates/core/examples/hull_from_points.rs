//! Hull of a uniform disk sample: boundary arcs, area, extreme points and an SVG.
//!
//! `cargo run --release --example hull_from_points -- [n] [r] [out.svg]`

use rconvex::{io, Point2, RHull, SamplingLaw, SupportShape};

fn main() -> rconvex::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let r = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let law = SamplingLaw::uniform(SupportShape::disk(Point2::ORIGIN, 1.0)?);
    let hull = RHull::new(law.sample(n, 7)?, r)?;
    let b = hull.boundary();
    println!("n = {n}, r = {r}");
    println!("arcs = {}, loops = {}, extremes = {}", b.arcs.len(), b.loops.len(), hull.extreme_indices().len());
    println!("area = {:.5} (disk: {:.5}), perimeter = {:.5}", b.area(), std::f64::consts::PI, b.perimeter());
    for (k, l) in b.loops.iter().enumerate() {
        println!("loop {k}: {} arcs, turning {:.6}, closed {}", l.arcs.len(), l.turning, l.closed);
    }
    if let Some(path) = args.next() {
        io::write_file(path.as_ref(), io::boundary_svg(&b, hull.cloud().points()).as_bytes())?;
        println!("wrote {path}");
    }
    Ok(())
}

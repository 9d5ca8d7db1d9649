//! Equilateral triangle with `r` equal to its circumradius: the open and
//! closed closings differ exactly at the circumcenter.

use rconvex::{Point2, PointCloud, RHull, Semantics};

fn main() -> rconvex::Result<()> {
    let h = 3f64.sqrt() / 2.0;
    let cloud = PointCloud::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)])?;
    let r = 1.0 / 3f64.sqrt();
    let c = Point2::new(0.5, h / 3.0);
    for sem in [Semantics::Closed, Semantics::Open] {
        let hull = RHull::new(cloud.clone(), r)?.with_semantics(sem);
        println!(
            "{sem:?}: circumcenter inside = {}, extremes = {:?}, arcs = {}",
            hull.contains(c),
            hull.extreme_indices(),
            hull.boundary().arcs.len()
        );
    }
    Ok(())
}

//! Near-boundary measure bounds and the two-disk overlap used for the
//! matching lower bound.

use rconvex::oracles::{bound_grid, check_measure_bounds, disk_lower_bound_geometry};
use rconvex::Point2;

fn main() -> rconvex::Result<()> {
    let rows = check_measure_bounds(1.0, &bound_grid(1.0, 10), 1.0 / std::f64::consts::PI, 20_000, 3)?;
    for r in &rows {
        println!("{:<28} {:>5} checks, {} failures, worst margin {:.3e}", r.name, r.trials, r.failures, r.worst_margin);
    }
    let g = disk_lower_bound_geometry(1.0, 0.5, Point2::new(0.875, 0.0))?;
    println!(
        "x̃ = ({}, {}), overlap {:.6} = chord {:.6} + cap {:.6} (lens {:.6}), 2·chord {:.6}",
        g.x_tilde.x, g.x_tilde.y, g.overlap, g.chord, g.cap, g.lens, 2.0 * g.chord
    );
    Ok(())
}

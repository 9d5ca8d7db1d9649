//! Closed-form areas of the Reuleaux triangle and chord regions, checked by
//! Monte Carlo and quadrature, and the contact heights between two disks.

use rconvex::geom::{circular_segment_area, contact_geometry, region_area_mc, reuleaux, UnitVec};
use rconvex::oracles::chord_area_quadrature;

fn main() -> rconvex::Result<()> {
    let t = reuleaux(UnitVec::from_angle(1.0), 0.5)?;
    let (est, se) = region_area_mc(|p| t.contains(p), t.bbox(), 1_000_000, 1)?;
    println!("Reuleaux r=0.5: closed form {:.6}, Monte Carlo {:.6} ± {:.6}", t.area(), est, se);

    for (alpha, r, rho) in [(1.0, 0.5, 0.125), (1.0, 0.5, 0.25), (2.0, 1.0, 0.1)] {
        let g = contact_geometry(alpha, r, rho)?;
        let exact = circular_segment_area(r, g.h1);
        println!(
            "α={alpha} r={r} ρ={rho}: h1={:.6} h2={:.6} λ={:.6} residual={:.1e}  chord area {:.8} (quadrature {:.8})",
            g.h1,
            g.h2,
            g.lambda,
            g.residual(),
            exact,
            chord_area_quadrature(r, g.h1)
        );
    }
    Ok(())
}

//! Discrete closing (dilation then erosion by a lattice disk) on a global
//! square lattice, used as a definition-level oracle for the exact engine.

use crate::error::{domain, precondition, Error, Result};
use super::buckets::point_buckets;
use crate::geom::{Aabb, Point2};

/// Largest grid the raster oracle will allocate.
pub const MAX_CELLS: u64 = 100_000_000;

const SE_TOL: f64 = 1e-9;

/// A window of the lattice `{[i h, (i+1) h) × [j h, (j+1) h)}` with one bit per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterMask {
    i0: i64,
    j0: i64,
    cell_size_bits: u64,
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RasterMask {
    pub fn cell_size(&self) -> f64 {
        f64::from_bits(self.cell_size_bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Lower-left corner of the window.
    pub fn origin(&self) -> Point2 {
        let h = self.cell_size();
        Point2::new(self.i0 as f64 * h, self.j0 as f64 * h)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.width + i]
    }

    /// Window cell holding `x`, if any.
    pub fn cell_of(&self, x: Point2) -> Option<(usize, usize)> {
        let h = self.cell_size();
        let i = (x.x / h).floor() as i64 - self.i0;
        let j = (x.y / h).floor() as i64 - self.j0;
        (i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height).then_some((i as usize, j as usize))
    }

    pub fn contains(&self, x: Point2) -> bool {
        self.cell_of(x).is_some_and(|(i, j)| self.get(i, j))
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point2 {
        let h = self.cell_size();
        Point2::new((self.i0 + i as i64) as f64 * h + 0.5 * h, (self.j0 + j as i64) as f64 * h + 0.5 * h)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Filled-cell count times cell area.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.cell_size() * self.cell_size()
    }

    pub fn filled_centers(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(self.count());
        for j in 0..self.height {
            for i in 0..self.width {
                if self.get(i, j) {
                    out.push(self.cell_center(i, j));
                }
            }
        }
        out
    }

    /// Binary PGM (P5), top row first, 255 inside and 0 outside.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.width * self.height);
        for j in (0..self.height).rev() {
            for i in 0..self.width {
                out.push(if self.get(i, j) { 255 } else { 0 });
            }
        }
        out
    }
}

/// Closing sampled at cell centers. The dilation is exact at each center; the
/// erosion measures distance to undilated centers, which sit on average half
/// a cell past the dilation boundary, so its radius is widened by `h / 2`.
/// Cells holding a sample are always kept.
pub fn closing_grid(points: &[Point2], r: f64, cell_size: f64) -> Result<RasterMask> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("radius {r} must be positive"));
    }
    if !(cell_size > 0.0) || cell_size > r / 10.0 {
        return precondition(format!("cell size {cell_size} must lie in (0, r/10] for r = {r}"));
    }
    let bbox = Aabb::around_points(points).ok_or_else(|| Error::Precondition("empty point set".into()))?;
    let h = cell_size;
    let i0 = ((bbox.min.x - 2.0 * r) / h).floor() as i64 - 2;
    let j0 = ((bbox.min.y - 2.0 * r) / h).floor() as i64 - 2;
    let i1 = ((bbox.max.x + 2.0 * r) / h).floor() as i64 + 2;
    let j1 = ((bbox.max.y + 2.0 * r) / h).floor() as i64 + 2;
    let (w, ht) = ((i1 - i0 + 1) as u64, (j1 - j0 + 1) as u64);
    if w.saturating_mul(ht) > MAX_CELLS {
        return Err(Error::Resource(format!("raster of {w}x{ht} cells exceeds {MAX_CELLS}")));
    }
    let (w, ht) = (w as usize, ht as usize);
    let mut seeds = vec![false; w * ht];
    for p in points {
        let i = ((p.x / h).floor() as i64 - i0) as usize;
        let j = ((p.y / h).floor() as i64 - j0) as usize;
        seeds[j * w + i] = true;
    }
    let rc = r / h;
    let d1 = squared_edt(&seeds, w, ht);
    // a seed cell center is within h/√2 of its sample, so only that band needs the exact test
    let slack = std::f64::consts::FRAC_1_SQRT_2 + 1e-9;
    let index = point_buckets(points, r);
    let mut dilated = vec![false; w * ht];
    for j in 0..ht {
        for i in 0..w {
            let ds = d1[j * w + i].sqrt();
            dilated[j * w + i] = if ds < rc - slack {
                true
            } else if ds > rc + slack {
                false
            } else {
                let c = Point2::new((i0 + i as i64) as f64 * h + 0.5 * h, (j0 + j as i64) as f64 * h + 0.5 * h);
                let mut best = f64::INFINITY;
                index.visit(Aabb::new(c, c).inflate(r * (1.0 + SE_TOL)), |k| best = best.min(points[k as usize].dist2(c)));
                best <= r * r * (1.0 + SE_TOL)
            };
        }
    }
    let outside: Vec<bool> = dilated.iter().map(|&b| !b).collect();
    let d2 = squared_edt(&outside, w, ht);
    let erode = (rc + 0.5) * (rc + 0.5) * (1.0 + SE_TOL);
    let bits = d2.iter().zip(&seeds).map(|(&d, &sd)| d > erode || sd).collect();
    Ok(RasterMask { i0, j0, cell_size_bits: h.to_bits(), width: w, height: ht, bits })
}

/// Squared Euclidean distance (in cells) to the nearest feature cell.
fn squared_edt(feature: &[bool], w: usize, h: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = feature.iter().map(|&b| if b { 0.0 } else { f64::INFINITY }).collect();
    let n = w.max(h);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for i in 0..w {
        for j in 0..h {
            f[j] = grid[j * w + i];
        }
        lower_envelope(&f[..h], &mut d[..h], &mut v, &mut z);
        for j in 0..h {
            grid[j * w + i] = d[j];
        }
    }
    for j in 0..h {
        f[..w].copy_from_slice(&grid[j * w..(j + 1) * w]);
        lower_envelope(&f[..w], &mut d[..w], &mut v, &mut z);
        grid[j * w..(j + 1) * w].copy_from_slice(&d[..w]);
    }
    grid
}

/// One-dimensional distance transform of sampled function `f` (Felzenszwalb–Huttenlocher).
fn lower_envelope(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let mut len = 0usize;
    for q in 0..f.len() {
        if !f[q].is_finite() {
            continue;
        }
        let qf = q as f64;
        let mut s = f64::NEG_INFINITY;
        while len > 0 {
            let p = v[len - 1];
            let pf = p as f64;
            s = ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * (qf - pf));
            if s <= z[len - 1] {
                len -= 1;
                s = f64::NEG_INFINITY;
            } else {
                break;
            }
        }
        v[len] = q;
        z[len] = s;
        len += 1;
    }
    if len == 0 {
        out.fill(f64::INFINITY);
        return;
    }
    z[len] = f64::INFINITY;
    let mut k = 0;
    for q in 0..f.len() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let dq = qf - v[k] as f64;
        out[q] = dq * dq + f[v[k]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edt_matches_brute_force() {
        let (w, h) = (23, 17);
        let mut feat = vec![false; w * h];
        for &(i, j) in &[(3usize, 4usize), (20, 1), (11, 15), (12, 15)] {
            feat[j * w + i] = true;
        }
        let d = squared_edt(&feat, w, h);
        for j in 0..h {
            for i in 0..w {
                let mut best = f64::INFINITY;
                for jj in 0..h {
                    for ii in 0..w {
                        if feat[jj * w + ii] {
                            let dx = i as f64 - ii as f64;
                            let dy = j as f64 - jj as f64;
                            best = best.min(dx * dx + dy * dy);
                        }
                    }
                }
                assert_eq!(d[j * w + i], best);
            }
        }
        assert!(squared_edt(&vec![false; 6], 3, 2).iter().all(|x| x.is_infinite()));
    }

    #[test]
    fn singleton_closes_to_its_cell() {
        let p = Point2::new(0.3712, -0.118);
        let m = closing_grid(&[p], 0.5, 0.02).unwrap();
        assert_eq!(m.count(), 1);
        assert!(m.contains(p));
    }

    #[test]
    fn guards() {
        let p = [Point2::ORIGIN];
        assert!(matches!(closing_grid(&p, 0.5, 0.06), Err(Error::Precondition(_))));
        assert!(matches!(closing_grid(&p, 0.0, 0.01), Err(Error::Domain(_))));
        let far = [Point2::ORIGIN, Point2::new(1e4, 1e4)];
        assert!(matches!(closing_grid(&far, 1.0, 0.1), Err(Error::Resource(_))));
    }

    #[test]
    fn closing_keeps_samples_and_tracks_exact_area() {
        let pts: Vec<Point2> = (0..40)
            .map(|k| {
                let t = k as f64 * 0.61803398875;
                Point2::new((t * 7.0).sin(), (t * 3.0).cos() * 0.7)
            })
            .collect();
        let m = closing_grid(&pts, 0.3, 0.005).unwrap();
        assert!(pts.iter().all(|&p| m.contains(p)));
        let hull = crate::hull::RHull::new(crate::hull::PointCloud::new(pts).unwrap(), 0.3).unwrap();
        let b = hull.boundary();
        assert!((m.area() - b.area()).abs() < 0.5 * b.perimeter() * 0.005, "{} vs {}", m.area(), b.area());
    }

    #[test]
    fn pgm_layout() {
        let m = closing_grid(&[Point2::new(0.05, 0.05)], 0.5, 0.05).unwrap();
        let bytes = m.to_pgm();
        let header = format!("P5\n{} {}\n255\n", m.width(), m.height());
        assert!(bytes.starts_with(header.as_bytes()));
        assert_eq!(bytes.len(), header.len() + m.width() * m.height());
        assert_eq!(bytes.iter().skip(header.len()).filter(|&&b| b == 255).count(), 1);
    }
}

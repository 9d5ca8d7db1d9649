use crate::geom::{Aabb, Point2};

/// Uniform bucket grid in compressed-row layout. Items are registered under
/// every bucket their box overlaps; boxes outside the domain are clamped to
/// the border buckets.
#[derive(Clone, Debug)]
pub(crate) struct Buckets {
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl Buckets {
    pub fn build<I>(domain: Aabb, cell: f64, max_per_axis: usize, entries: I) -> Self
    where
        I: Iterator<Item = (u32, Aabb)> + Clone,
    {
        let span = domain.width().max(domain.height());
        let cell = cell.max(span / max_per_axis as f64).max(f64::MIN_POSITIVE);
        let nx = ((domain.width() / cell).floor() as usize + 1).min(max_per_axis);
        let ny = ((domain.height() / cell).floor() as usize + 1).min(max_per_axis);
        let mut g = Buckets {
            origin: domain.min,
            cell,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            items: Vec::new(),
        };
        for (_, b) in entries.clone() {
            let (i0, j0, i1, j1) = g.range(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    g.start[j * nx + i + 1] += 1;
                }
            }
        }
        for k in 0..nx * ny {
            g.start[k + 1] += g.start[k];
        }
        let mut fill = g.start.clone();
        g.items = vec![0; g.start[nx * ny] as usize];
        for (id, b) in entries {
            let (i0, j0, i1, j1) = g.range(b);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let k = j * nx + i;
                    g.items[fill[k] as usize] = id;
                    fill[k] += 1;
                }
            }
        }
        g
    }

    fn index(&self, v: f64, o: f64, n: usize) -> usize {
        let k = ((v - o) / self.cell).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(n - 1)
        }
    }

    fn range(&self, b: Aabb) -> (usize, usize, usize, usize) {
        (
            self.index(b.min.x, self.origin.x, self.nx),
            self.index(b.min.y, self.origin.y, self.ny),
            self.index(b.max.x, self.origin.x, self.nx),
            self.index(b.max.y, self.origin.y, self.ny),
        )
    }

    /// Items registered in the bucket holding `p` (clamped to the grid).
    pub fn at(&self, p: Point2) -> &[u32] {
        let k = self.index(p.y, self.origin.y, self.ny) * self.nx + self.index(p.x, self.origin.x, self.nx);
        &self.items[self.start[k] as usize..self.start[k + 1] as usize]
    }

    /// Visits items of every bucket overlapping `b`; items spanning several
    /// buckets are visited more than once.
    pub fn visit(&self, b: Aabb, mut f: impl FnMut(u32)) {
        let (i0, j0, i1, j1) = self.range(b);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let k = j * self.nx + i;
                for &id in &self.items[self.start[k] as usize..self.start[k + 1] as usize] {
                    f(id);
                }
            }
        }
    }
}

/// Point index over `points` with `cell`-sized buckets.
pub(crate) fn point_buckets(points: &[Point2], cell: f64) -> Buckets {
    let domain = Aabb::around_points(points).expect("non-empty point set");
    Buckets::build(
        domain,
        cell,
        1024,
        points.iter().enumerate().map(|(i, &p)| (i as u32, Aabb::new(p, p))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_all_points_within_radius() {
        let pts: Vec<Point2> = (0..400).map(|k| Point2::new((k % 20) as f64 * 0.1, (k / 20) as f64 * 0.07)).collect();
        let g = point_buckets(&pts, 0.15);
        let x = Point2::new(0.93, 0.61);
        let rad = 0.2;
        let mut found = Vec::new();
        g.visit(Aabb::new(x, x).inflate(rad), |i| {
            if pts[i as usize].dist(x) <= rad {
                found.push(i)
            }
        });
        found.sort_unstable();
        let expect: Vec<u32> = (0..400).filter(|&i| pts[i as usize].dist(x) <= rad).collect();
        assert_eq!(found, expect);
        // far queries clamp onto border buckets
        assert!(!g.at(Point2::new(-50.0, -50.0)).is_empty());
    }
}

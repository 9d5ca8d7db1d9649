//! Incremental Delaunay triangulation (Bowyer–Watson with ghost triangles)
//! on robust orientation and incircle predicates.

use robust::{incircle, orient2d, Coord};

use crate::geom::Point2;

pub(crate) const GHOST: u32 = u32::MAX;

#[inline]
fn c(p: Point2) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

#[inline]
pub(crate) fn orient(a: Point2, b: Point2, p: Point2) -> f64 {
    orient2d(c(a), c(b), c(p))
}

/// An undirected Delaunay edge stored with the vertex opposite it on each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    /// Third vertex of the triangle to the left of `a → b`.
    pub left: Option<u32>,
    /// Third vertex of the triangle to the right of `a → b`.
    pub right: Option<u32>,
}

/// Delaunay triangulation of the distinct points of a cloud.
///
/// Vertices are indexed by distinct location; `vertex_of` maps cloud indices
/// onto them. Collinear inputs and inputs with fewer than three distinct
/// points produce a degenerate structure holding only the sorted edge chain.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point2>,
    vertex_of: Vec<u32>,
    first_index: Vec<usize>,
    triangles: Vec<[u32; 3]>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<u32>>,
    hull: Vec<u32>,
    degenerate: bool,
}

impl Triangulation {
    pub fn new(cloud: &[Point2]) -> Self {
        let (points, vertex_of, first_index) = dedup(cloud);
        match Builder::run(&points).map(Builder::finish) {
            Some((triangles, edges, adjacency, hull)) => Triangulation {
                points,
                vertex_of,
                first_index,
                triangles,
                edges,
                adjacency,
                hull,
                degenerate: false,
            },
            None => degenerate(points, vertex_of, first_index),
        }
    }

    /// Distinct vertex positions.
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Vertex id of each cloud index.
    pub fn vertex_of(&self) -> &[u32] {
        &self.vertex_of
    }

    /// Lowest cloud index at each vertex.
    pub fn first_index(&self) -> &[usize] {
        &self.first_index
    }

    pub fn has_duplicates(&self) -> bool {
        self.points.len() < self.vertex_of.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Counter-clockwise triangles.
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    /// Convex hull vertices in counter-clockwise order (the sorted chain when
    /// degenerate).
    pub fn hull(&self) -> &[u32] {
        &self.hull
    }

    pub fn circumcenter(&self, t: usize) -> Point2 {
        let [a, b, c] = self.triangles[t].map(|v| self.points[v as usize]);
        circumcenter(a, b, c)
    }

    pub fn circumradius(&self, t: usize) -> f64 {
        self.circumcenter(t).dist(self.points[self.triangles[t][0] as usize])
    }
}

pub(crate) fn circumcenter(a: Point2, b: Point2, c: Point2) -> Point2 {
    let b = b - a;
    let c = c - a;
    let d = 2.0 * b.cross(c);
    let (b2, c2) = (b.norm2(), c.norm2());
    a + Point2::new((c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d)
}

fn dedup(cloud: &[Point2]) -> (Vec<Point2>, Vec<u32>, Vec<usize>) {
    let mut order: Vec<usize> = (0..cloud.len()).collect();
    order.sort_by(|&i, &j| {
        cloud[i]
            .x
            .total_cmp(&cloud[j].x)
            .then(cloud[i].y.total_cmp(&cloud[j].y))
            .then(i.cmp(&j))
    });
    let mut points = Vec::with_capacity(cloud.len());
    let mut first_index = Vec::with_capacity(cloud.len());
    let mut vertex_of = vec![0u32; cloud.len()];
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || cloud[i] != cloud[order[k - 1]] {
            points.push(cloud[i]);
            first_index.push(i);
        }
        vertex_of[i] = (points.len() - 1) as u32;
    }
    (points, vertex_of, first_index)
}

fn degenerate(points: Vec<Point2>, vertex_of: Vec<u32>, first_index: Vec<usize>) -> Triangulation {
    // points are sorted lexicographically, which is the order along the line
    let n = points.len() as u32;
    let edges: Vec<Edge> = (1..n).map(|i| Edge { a: i - 1, b: i, left: None, right: None }).collect();
    let mut adjacency = vec![Vec::new(); n as usize];
    for e in &edges {
        adjacency[e.a as usize].push(e.b);
        adjacency[e.b as usize].push(e.a);
    }
    Triangulation {
        points,
        vertex_of,
        first_index,
        triangles: Vec::new(),
        edges,
        adjacency,
        hull: (0..n).collect(),
        degenerate: true,
    }
}

fn hilbert_index(mut x: u32, mut y: u32, side: u32) -> u64 {
    let mut d = 0u64;
    let mut s = side / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = side - 1 - x;
                y = side - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

fn hilbert_order(points: &[Point2]) -> Vec<u32> {
    const SIDE: u32 = 1 << 16;
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let scale = (SIDE - 1) as f64 / span;
    let mut keyed: Vec<(u64, u32)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = ((p.x - lo.x) * scale) as u32;
            let y = ((p.y - lo.y) * scale) as u32;
            (hilbert_index(x, y, SIDE), i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|k| k.1).collect()
}

struct Builder<'a> {
    pts: &'a [Point2],
    tris: Vec<[u32; 3]>,
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    stamp: Vec<u32>,
    generation: u32,
    free: Vec<u32>,
    last: u32,
    // scratch
    cavity: Vec<u32>,
    boundary: Vec<(u32, u32, u32)>,
    fresh: Vec<(u32, u32)>,
}

impl<'a> Builder<'a> {
    fn run(pts: &'a [Point2]) -> Option<Self> {
        if pts.len() < 3 {
            return None;
        }
        let order = hilbert_order(pts);
        let (i0, i1) = (order[0], order[1]);
        let k = (2..order.len()).find(|&k| orient(pts[i0 as usize], pts[i1 as usize], pts[order[k] as usize]) != 0.0)?;
        let i2 = order[k];
        let mut b = Builder {
            pts,
            tris: Vec::with_capacity(2 * pts.len() + 8),
            nbr: Vec::with_capacity(2 * pts.len() + 8),
            alive: Vec::with_capacity(2 * pts.len() + 8),
            stamp: Vec::with_capacity(2 * pts.len() + 8),
            generation: 0,
            free: Vec::new(),
            last: 0,
            cavity: Vec::new(),
            boundary: Vec::new(),
            fresh: Vec::new(),
        };
        b.seed(i0, i1, i2);
        for (j, &v) in order.iter().enumerate() {
            if j != 0 && j != 1 && j != k {
                b.insert(v);
            }
        }
        Some(b)
    }

    fn p(&self, v: u32) -> Point2 {
        self.pts[v as usize]
    }

    fn alloc(&mut self, t: [u32; 3]) -> u32 {
        if let Some(id) = self.free.pop() {
            self.tris[id as usize] = t;
            self.nbr[id as usize] = [GHOST; 3];
            self.alive[id as usize] = true;
            id
        } else {
            self.tris.push(t);
            self.nbr.push([GHOST; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    fn edge_slot(&self, t: u32, a: u32, b: u32) -> usize {
        let tri = self.tris[t as usize];
        (0..3)
            .find(|&i| tri[(i + 1) % 3] == a && tri[(i + 2) % 3] == b)
            .expect("edge belongs to triangle")
    }

    fn seed(&mut self, a: u32, b: u32, c: u32) {
        let (b, c) = if orient(self.p(a), self.p(b), self.p(c)) > 0.0 { (b, c) } else { (c, b) };
        let ids = [
            self.alloc([a, b, c]),
            self.alloc([b, a, GHOST]),
            self.alloc([c, b, GHOST]),
            self.alloc([a, c, GHOST]),
        ];
        for &t in &ids {
            for i in 0..3 {
                let tri = self.tris[t as usize];
                let (u, v) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let twin = ids
                    .iter()
                    .copied()
                    .find(|&s| s != t && (0..3).any(|j| {
                        let o = self.tris[s as usize];
                        o[(j + 1) % 3] == v && o[(j + 2) % 3] == u
                    }))
                    .expect("seed triangles close up");
                self.nbr[t as usize][i] = twin;
            }
        }
        self.last = ids[0];
    }

    fn conflicts(&self, t: u32, p: Point2) -> bool {
        let [a, b, c] = self.tris[t as usize];
        if c == GHOST {
            let (u, v) = (self.p(a), self.p(b));
            let o = orient(u, v, p);
            o > 0.0 || (o == 0.0 && (p - u).dot(v - u) > 0.0 && (p - v).dot(u - v) > 0.0)
        } else {
            incircle(self.c(a), self.c(b), self.c(c), Coord { x: p.x, y: p.y }) > 0.0
        }
    }

    fn c(&self, v: u32) -> Coord<f64> {
        c(self.p(v))
    }

    fn locate(&self, p: Point2) -> u32 {
        let mut t = self.last;
        if self.tris[t as usize][2] == GHOST {
            t = self.nbr[t as usize][2];
        }
        let cap = 4 * self.tris.len() + 64;
        for step in 0..cap {
            let tri = self.tris[t as usize];
            if tri[2] == GHOST {
                return t;
            }
            let mut next = None;
            for k in 0..3 {
                let i = (k + step) % 3;
                if orient(self.p(tri[(i + 1) % 3]), self.p(tri[(i + 2) % 3]), p) < 0.0 {
                    next = Some(self.nbr[t as usize][i]);
                    break;
                }
            }
            match next {
                Some(n) => t = n,
                None => return t,
            }
        }
        (0..self.tris.len() as u32)
            .find(|&s| self.alive[s as usize] && self.conflicts(s, p))
            .expect("some triangle conflicts with a new point")
    }

    fn insert(&mut self, v: u32) {
        let p = self.p(v);
        let start = self.locate(p);
        self.generation += 1;
        let g = self.generation;
        self.cavity.clear();
        self.boundary.clear();
        self.stamp[start as usize] = g;
        self.cavity.push(start);
        let mut head = 0;
        while head < self.cavity.len() {
            let t = self.cavity[head];
            head += 1;
            for i in 0..3 {
                let nb = self.nbr[t as usize][i];
                if self.stamp[nb as usize] == g {
                    continue;
                }
                if self.conflicts(nb, p) {
                    self.stamp[nb as usize] = g;
                    self.cavity.push(nb);
                } else {
                    let tri = self.tris[t as usize];
                    self.boundary.push((tri[(i + 1) % 3], tri[(i + 2) % 3], nb));
                }
            }
        }
        for k in 0..self.cavity.len() {
            let t = self.cavity[k];
            self.alive[t as usize] = false;
            self.free.push(t);
        }
        self.fresh.clear();
        for k in 0..self.boundary.len() {
            let (a, b, outer) = self.boundary[k];
            let tri = if a == GHOST {
                [b, v, GHOST]
            } else if b == GHOST {
                [v, a, GHOST]
            } else {
                [a, b, v]
            };
            let t = self.alloc(tri);
            let slot = self.edge_slot(t, a, b);
            self.nbr[t as usize][slot] = outer;
            let back = self.edge_slot(outer, b, a);
            self.nbr[outer as usize][back] = t;
            self.fresh.push((a, t));
            if tri[2] != GHOST {
                self.last = t;
            }
        }
        self.fresh.sort_unstable();
        for k in 0..self.boundary.len() {
            let (a, b, _) = self.boundary[k];
            let t = self.fresh[self.fresh.binary_search_by_key(&a, |f| f.0).unwrap()].1;
            let s = self.fresh[self.fresh.binary_search_by_key(&b, |f| f.0).expect("cavity boundary is a cycle")].1;
            // edge b→v of t pairs with v→b of s
            let i = self.edge_slot(t, b, v);
            self.nbr[t as usize][i] = s;
            let j = self.edge_slot(s, v, b);
            self.nbr[s as usize][j] = t;
        }
    }

    #[allow(clippy::type_complexity)]
    fn finish(self) -> (Vec<[u32; 3]>, Vec<Edge>, Vec<Vec<u32>>, Vec<u32>) {
        let n = self.pts.len();
        let mut triangles = Vec::with_capacity(2 * n);
        let mut edges = Vec::with_capacity(3 * n);
        let mut next_ccw = vec![GHOST; n];
        for t in 0..self.tris.len() {
            if !self.alive[t] {
                continue;
            }
            let tri = self.tris[t];
            if tri[2] == GHOST {
                next_ccw[tri[1] as usize] = tri[0];
                continue;
            }
            triangles.push(tri);
            for i in 0..3 {
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let other = self.tris[self.nbr[t][i] as usize];
                if other[2] == GHOST {
                    edges.push(Edge { a, b, left: Some(tri[i]), right: None });
                } else if a < b {
                    let j = (0..3).find(|&j| other[j] != a && other[j] != b).unwrap();
                    edges.push(Edge { a, b, left: Some(tri[i]), right: Some(other[j]) });
                }
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.a as usize].push(e.b);
            adjacency[e.b as usize].push(e.a);
        }
        let start = (0..n).find(|&v| next_ccw[v] != GHOST).unwrap() as u32;
        let mut hull = vec![start];
        let mut v = next_ccw[start as usize];
        while v != start {
            hull.push(v);
            v = next_ccw[v as usize];
        }
        (triangles, edges, adjacency, hull)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Point2::new(rng.gen(), rng.gen())).collect()
    }

    fn assert_empty_circles(t: &Triangulation) {
        let pts = t.points();
        for (k, tri) in t.triangles().iter().enumerate() {
            let [a, b, c] = tri.map(|v| pts[v as usize]);
            assert!(orient(a, b, c) > 0.0);
            let cc = t.circumcenter(k);
            let rr = t.circumradius(k);
            for (i, p) in pts.iter().enumerate() {
                if tri.contains(&(i as u32)) {
                    continue;
                }
                assert!(
                    incircle(c_(a), c_(b), c_(c), c_(*p)) <= 0.0,
                    "vertex {i} inside circumcircle of {tri:?}"
                );
                assert!(p.dist(cc) >= rr * (1.0 - 1e-12));
            }
        }
    }

    fn c_(p: Point2) -> Coord<f64> {
        c(p)
    }

    #[test]
    fn single_triangle() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.3, 0.8)];
        let t = Triangulation::new(&pts);
        assert_eq!(t.triangles().len(), 1);
        let cc = t.circumcenter(0);
        let d = pts.map(|p| p.dist(cc));
        assert!((d[0] - d[1]).abs() < 1e-12 && (d[0] - d[2]).abs() < 1e-12);
        assert_eq!(t.edges().len(), 3);
        assert_eq!(t.hull().len(), 3);
    }

    #[test]
    fn square_has_two_triangles() {
        let s = 2.0;
        let pts = [Point2::new(0.0, 0.0), Point2::new(s, 0.0), Point2::new(s, s), Point2::new(0.0, s)];
        let t = Triangulation::new(&pts);
        assert_eq!(t.triangles().len(), 2);
        for k in 0..2 {
            assert!((t.circumradius(k) - s * 2f64.sqrt() / 2.0).abs() < 1e-12);
        }
        assert_empty_circles(&t);
    }

    #[test]
    fn random_clouds_are_delaunay_and_satisfy_euler() {
        for (n, seed) in [(10, 1), (100, 2), (700, 3)] {
            let t = Triangulation::new(&random_points(n, seed));
            assert!(!t.is_degenerate());
            assert_empty_circles(&t);
            assert_eq!(t.triangles().len(), 2 * n - 2 - t.hull().len());
            assert_eq!(t.edges().len(), 3 * n - 3 - t.hull().len());
        }
    }

    #[test]
    fn lattice_with_cocircular_points() {
        let mut pts = Vec::new();
        for i in 0..12 {
            for j in 0..9 {
                pts.push(Point2::new(i as f64 * 0.5, j as f64 * 0.5));
            }
        }
        let t = Triangulation::new(&pts);
        assert_empty_circles(&t);
        let n = pts.len();
        // collinear hull points are all hull vertices
        assert_eq!(t.hull().len(), 2 * (12 + 9) - 4);
        assert_eq!(t.triangles().len(), 2 * n - 2 - t.hull().len());
    }

    #[test]
    fn points_on_a_circle() {
        let pts: Vec<Point2> = (0..40)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 40.0;
                Point2::new(a.cos(), a.sin())
            })
            .chain(std::iter::once(Point2::new(0.01, 0.02)))
            .collect();
        let t = Triangulation::new(&pts);
        assert_eq!(t.triangles().len(), 2 * 41 - 2 - t.hull().len());
    }

    #[test]
    fn duplicates_are_merged() {
        let mut pts = random_points(50, 7);
        pts.push(pts[3]);
        pts.push(pts[10]);
        let t = Triangulation::new(&pts);
        assert!(t.has_duplicates());
        assert_eq!(t.points().len(), 50);
        assert_eq!(t.vertex_of()[50], t.vertex_of()[3]);
        assert_eq!(t.first_index()[t.vertex_of()[51] as usize], 10);
        assert_empty_circles(&t);
    }

    #[test]
    fn collinear_input_gives_a_chain() {
        let pts: Vec<Point2> = (0..6).map(|k| Point2::new(k as f64 * 0.5, 1.0 - k as f64 * 0.25)).rev().collect();
        let t = Triangulation::new(&pts);
        assert!(t.is_degenerate());
        assert!(t.triangles().is_empty());
        assert_eq!(t.edges().len(), 5);
        let single = Triangulation::new(&[Point2::new(1.0, 1.0)]);
        assert!(single.is_degenerate() && single.edges().is_empty());
    }

    #[test]
    fn adjacency_is_symmetric() {
        let t = Triangulation::new(&random_points(200, 11));
        for v in 0..t.points().len() as u32 {
            for &w in t.neighbors(v) {
                assert!(t.neighbors(w).contains(&v));
            }
        }
    }
}

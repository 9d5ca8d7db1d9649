//! Point files, CSV tables, SVG boundaries and file output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Aabb, Point2};
use crate::hull::{ArcBoundary, PointCloud};
use crate::metrics::{RateFit, RateResult};
use crate::oracles::CheckRow;

/// Parses one point per line as `x y` or `x,y`. Blank lines and `#`
/// comments are skipped.
pub fn parse_points(text: &str, path: &Path) -> Result<PointCloud> {
    let mut pts = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { path: path.to_path_buf(), line: k + 1, msg };
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if fields.len() != 2 {
            return Err(err(format!("expected two coordinates, found {}", fields.len())));
        }
        let mut xy = [0.0; 2];
        for (slot, f) in xy.iter_mut().zip(&fields) {
            *slot = f.parse::<f64>().map_err(|_| err(format!("`{f}` is not a number")))?;
            if !slot.is_finite() {
                return Err(err(format!("`{f}` is not finite")));
            }
        }
        pts.push(Point2::new(xy[0], xy[1]));
    }
    if pts.is_empty() {
        return Err(Error::Parse { path: path.to_path_buf(), line: 0, msg: "no points".into() });
    }
    PointCloud::new(pts)
}

pub fn read_points(path: &Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_points(&text, path)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    std::fs::write(path, bytes).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn points_text(points: &[Point2]) -> String {
    let mut s = String::new();
    for p in points {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    s
}

pub const RESULTS_HEADER: &str = "metric,n,r,replications,mean,stderr,normalized";
pub const FIT_HEADER: &str = "slope,slope_lo,slope_hi,intercept";
pub const VERIFY_HEADER: &str = "name,trials,failures,worst_margin";

pub fn results_csv(res: &RateResult) -> String {
    let mut s = format!("{RESULTS_HEADER}\n");
    for p in &res.points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            res.metric.name(),
            p.n,
            p.r,
            p.replications,
            p.mean,
            p.stderr,
            p.normalized
        );
    }
    s
}

pub fn fit_csv(fit: Option<&RateFit>) -> String {
    match fit {
        Some(f) => format!("{FIT_HEADER}\n{},{},{},{}\n", f.slope, f.slope_lo, f.slope_hi, f.intercept),
        None => format!("{FIT_HEADER}\nNaN,NaN,NaN,NaN\n"),
    }
}

pub fn verify_csv(rows: &[CheckRow]) -> String {
    let mut s = format!("{VERIFY_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.name, r.trials, r.failures, r.worst_margin);
    }
    s
}

/// SVG with the boundary arcs (and isolated points) in a y-up frame.
pub fn boundary_svg(boundary: &ArcBoundary, points: &[Point2]) -> String {
    let mut bbox = Aabb::around_points(points).unwrap_or(Aabb::new(Point2::ORIGIN, Point2::ORIGIN));
    for a in &boundary.arcs {
        bbox.include(a.start());
        bbox.include(a.point_at(0.5));
        bbox.include(a.end());
    }
    let pad = 0.05 * bbox.width().max(bbox.height()).max(1e-9);
    let b = bbox.inflate(pad);
    let stroke = 0.003 * b.width().max(b.height());
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        b.min.x,
        -b.max.y,
        b.width(),
        b.height()
    );
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    for a in &boundary.arcs {
        let (p, q) = (a.start(), a.end());
        let large = u8::from(a.sweep > std::f64::consts::PI);
        // clockwise in the y-up picture is the positive-angle sweep of SVG's y-down frame
        let _ = writeln!(
            s,
            r#"<path d="M {} {} A {} {} 0 {} 1 {} {}"/>"#,
            p.x, -p.y, a.radius, a.radius, large, q.x, -q.y
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="gray">"#);
    for p in points {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, p.x, -p.y, stroke);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="red">"#);
    for &i in &boundary.isolated {
        let p = points[i];
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, p.x, -p.y, 2.0 * stroke);
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::RHull;

    #[test]
    fn parses_both_separators_and_comments() {
        let c = parse_points("# header\n1 2\n\n3.5,-4 # trailing\n  5\t6\n", Path::new("p.txt")).unwrap();
        assert_eq!(c.points(), &[Point2::new(1.0, 2.0), Point2::new(3.5, -4.0), Point2::new(5.0, 6.0)]);
    }

    #[test]
    fn reports_line_numbers() {
        match parse_points("1 2\n3 x\n", Path::new("p.txt")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_points("1 2 3\n", Path::new("p")), Err(Error::Parse { line: 1, .. })));
        let e = parse_points("# nothing\n", Path::new("p")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let missing = read_points(Path::new("/nonexistent/points.txt")).unwrap_err();
        assert!(matches!(missing, Error::Io { .. }));
    }

    #[test]
    fn headers_are_stable() {
        assert_eq!(verify_csv(&[]), "name,trials,failures,worst_margin\n");
        assert_eq!(fit_csv(None).lines().next(), Some("slope,slope_lo,slope_hi,intercept"));
    }

    #[test]
    fn svg_has_one_path_per_arc() {
        let pts: Vec<Point2> = (0..30)
            .map(|k| {
                let t = k as f64 * 0.7;
                Point2::new(t.cos() * (0.3 + 0.02 * k as f64), t.sin() * 0.5)
            })
            .collect();
        let hull = RHull::new(PointCloud::new(pts.clone()).unwrap(), 0.4).unwrap();
        let b = hull.boundary();
        let svg = boundary_svg(&b, &pts);
        assert_eq!(svg.matches("<path").count(), b.arcs.len());
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

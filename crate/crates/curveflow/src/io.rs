//! Curve CSV, report JSON and SVG serialization for the command-line tools.
//!
//! All writers are atomic (write to a sibling temp file, then rename) and
//! deterministic: no timestamps, fixed field order, fixed float formatting.
//! CSV carries 17 significant digits, enough to reproduce every f64 bit for
//! bit.

use crate::curve::{CurveError, PlaneCurve};
use crate::geom::Vec2;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed curve CSV at line {line}: {detail}")]
    BadCsv { line: usize, detail: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("json serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `content` to `path` atomically via a sibling temp file.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<(), IoError> {
    let tmp = path.with_extension("tmp~");
    {
        let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        f.write_all(content).map_err(|e| io_err(&tmp, e))?;
        f.sync_all().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
    Ok(())
}

/// One sample per line, header `s,x,y,kappa`, LF endings, 17 significant
/// digits per value.
pub fn curve_to_csv(curve: &PlaneCurve) -> String {
    let mut out = String::from("s,x,y,kappa\n");
    for i in 0..curve.len() {
        let p = curve.points()[i];
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            curve.arc()[i],
            p.x,
            p.y,
            curve.kappas()[i]
        ));
    }
    out
}

pub fn write_curve_csv(path: &Path, curve: &PlaneCurve) -> Result<(), IoError> {
    write_atomic(path, curve_to_csv(curve).as_bytes())
}

/// Closure policy when reading a curve back from CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosurePolicy {
    /// Closed when the endpoints are within three median edge lengths.
    Auto,
    Closed,
    Open,
}

/// Parses a curve CSV. Tangents are re-estimated from the points; the
/// stored arc-length and curvature columns are kept as-is.
pub fn parse_curve_csv(text: &str, policy: ClosurePolicy) -> Result<PlaneCurve, IoError> {
    let mut points = Vec::new();
    let mut arc = Vec::new();
    let mut kappas = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            let header = line.trim();
            if header != "s,x,y,kappa" {
                return Err(IoError::BadCsv {
                    line: 1,
                    detail: format!("expected header `s,x,y,kappa`, got `{header}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(IoError::BadCsv {
                line: idx + 1,
                detail: format!("expected 4 comma-separated fields, got {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 4];
        for (j, f) in fields.iter().enumerate() {
            vals[j] = f.trim().parse::<f64>().map_err(|e| IoError::BadCsv {
                line: idx + 1,
                detail: format!("field {}: {e}", j + 1),
            })?;
            if !vals[j].is_finite() {
                return Err(IoError::BadCsv {
                    line: idx + 1,
                    detail: "non-finite value".into(),
                });
            }
        }
        arc.push(vals[0]);
        points.push(Vec2::new(vals[1], vals[2]));
        kappas.push(vals[3]);
    }
    if points.len() < 3 {
        return Err(IoError::BadCsv {
            line: 0,
            detail: format!("need at least 3 samples, got {}", points.len()),
        });
    }
    let closed = match policy {
        ClosurePolicy::Closed => true,
        ClosurePolicy::Open => false,
        ClosurePolicy::Auto => {
            let mut edges: Vec<f64> = points.windows(2).map(|w| w[0].dist(w[1])).collect();
            edges.sort_by(f64::total_cmp);
            let median = edges[edges.len() / 2];
            points[0].dist(points[points.len() - 1]) <= 3.0 * median
        }
    };
    let n = points.len();
    let mut tangents = Vec::with_capacity(n);
    for i in 0..n {
        let t = if closed {
            points[(i + 1) % n] - points[(i + n - 1) % n]
        } else if i == 0 {
            points[1] - points[0]
        } else if i == n - 1 {
            points[n - 1] - points[n - 2]
        } else {
            points[i + 1] - points[i - 1]
        };
        tangents.push(t);
    }
    Ok(PlaneCurve::from_samples(
        points, tangents, kappas, arc, closed,
    )?)
}

pub fn read_curve_csv(path: &Path, policy: ClosurePolicy) -> Result<PlaneCurve, IoError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_curve_csv(&text, policy)
}

/// Pretty JSON with a trailing newline, written atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Plain-path SVG of a curve, viewBox fitted to the bounding box with a 5%
/// margin, plus a vertical arrow marking the translation direction (0, 1).
/// The `desc` element carries caller-provided parameter text.
pub fn curve_to_svg(curve: &PlaneCurve, desc: &str) -> String {
    let (lo, hi) = curve.bbox();
    let w = (hi.x - lo.x).max(1e-9);
    let h = (hi.y - lo.y).max(1e-9);
    let margin = 0.05 * w.max(h);
    // svg's y axis points down; flip into screen coordinates
    let flip = |p: Vec2| Vec2::new(p.x, hi.y - p.y + lo.y);
    let view = format!(
        "{:.6} {:.6} {:.6} {:.6}",
        lo.x - margin,
        lo.y - margin,
        w + 2.0 * margin,
        h + 2.0 * margin
    );
    let stroke = 0.004 * w.max(h);
    let mut path = String::new();
    for (i, &p) in curve.points().iter().enumerate() {
        let q = flip(p);
        path.push_str(if i == 0 { "M " } else { " L " });
        path.push_str(&format!("{:.6} {:.6}", q.x, q.y));
    }
    if curve.closed() {
        path.push_str(" Z");
    }
    // vertical arrow of 20% of the bounding-box height, to the right of
    // the curve, pointing along (0, 1) in curve coordinates (up on screen)
    let ax = hi.x + 0.5 * margin;
    let ay0 = lo.y + 0.4 * h;
    let ay1 = ay0 + 0.2 * h;
    let a0 = flip(Vec2::new(ax, ay0));
    let a1 = flip(Vec2::new(ax, ay1));
    let head = 0.03 * h;
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{view}\">\n",
            "  <desc>{desc}</desc>\n",
            "  <path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"{sw:.6}\"/>\n",
            "  <path d=\"M {a0x:.6} {a0y:.6} L {a1x:.6} {a1y:.6} M {hlx:.6} {hly:.6} L {a1x:.6} {a1y:.6} L {hrx:.6} {hry:.6}\" ",
            "fill=\"none\" stroke=\"black\" stroke-width=\"{sw:.6}\"/>\n",
            "</svg>\n"
        ),
        view = view,
        desc = desc,
        path = path,
        sw = stroke,
        a0x = a0.x,
        a0y = a0.y,
        a1x = a1.x,
        a1y = a1.y,
        hlx = a1.x - head,
        hly = a1.y + head,
        hrx = a1.x + head,
        hry = a1.y + head,
    )
}

pub fn write_curve_svg(path: &Path, curve: &PlaneCurve, desc: &str) -> Result<(), IoError> {
    write_atomic(path, curve_to_svg(curve, desc).as_bytes())
}

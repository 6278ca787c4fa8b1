//! Sampled planar curves with per-sample Frenet data.

use crate::geom::{project_to_segment, Vec2};
use thiserror::Error;

pub const MIN_EDGE_LENGTH: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("a sampled curve needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate edge of length {length:.3e} at sample {index}")]
    DegenerateEdge { index: usize, length: f64 },
    #[error("arc-length samples must increase strictly (violated at sample {index})")]
    NonIncreasingArc { index: usize },
    #[error("non-finite coordinate at sample {index}")]
    NonFinite { index: usize },
}

/// An arc-length-ordered sequence of plane samples with unit tangents,
/// counter-clockwise unit normals, and signed curvature.
///
/// Closed curves store each point once; the wrap edge from the last sample
/// back to the first is implied.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    points: Vec<Vec2>,
    tangents: Vec<Vec2>,
    normals: Vec<Vec2>,
    kappas: Vec<f64>,
    arc: Vec<f64>,
    closed: bool,
}

impl PlaneCurve {
    /// Builds a curve from analytically known samples. Tangents are
    /// normalized; normals are always the counter-clockwise rotation of the
    /// tangent.
    pub fn from_samples(
        points: Vec<Vec2>,
        tangents: Vec<Vec2>,
        kappas: Vec<f64>,
        arc: Vec<f64>,
        closed: bool,
    ) -> Result<Self, CurveError> {
        let n = points.len();
        if n < 2 {
            return Err(CurveError::TooFewPoints { needed: 2, got: n });
        }
        assert_eq!(tangents.len(), n);
        assert_eq!(kappas.len(), n);
        assert_eq!(arc.len(), n);
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(CurveError::NonFinite { index: i });
            }
        }
        for i in 1..n {
            if arc[i] <= arc[i - 1] {
                return Err(CurveError::NonIncreasingArc { index: i });
            }
        }
        let tangents: Vec<Vec2> = tangents.into_iter().map(Vec2::normalized).collect();
        let normals = tangents.iter().map(|t| t.rot90()).collect();
        Ok(PlaneCurve {
            points,
            tangents,
            normals,
            kappas,
            arc,
            closed,
        })
    }

    /// Builds a curve from bare points, estimating arc length by cumulative
    /// chords, tangents by central differences and curvature by turning
    /// angles.
    pub fn from_points(points: Vec<Vec2>, closed: bool) -> Result<Self, CurveError> {
        let n = points.len();
        if n < 3 {
            return Err(CurveError::TooFewPoints { needed: 3, got: n });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(CurveError::NonFinite { index: i });
            }
        }
        let mut arc = vec![0.0; n];
        for i in 1..n {
            let len = points[i].dist(points[i - 1]);
            if len < MIN_EDGE_LENGTH {
                return Err(CurveError::DegenerateEdge {
                    index: i,
                    length: len,
                });
            }
            arc[i] = arc[i - 1] + len;
        }
        if closed {
            let len = points[0].dist(points[n - 1]);
            if len < MIN_EDGE_LENGTH {
                return Err(CurveError::DegenerateEdge {
                    index: 0,
                    length: len,
                });
            }
        }
        let kappas = turning_angle_curvature(&points, closed)?;
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
            tangents.push(t.normalized());
        }
        let normals = tangents.iter().map(|t| t.rot90()).collect();
        Ok(PlaneCurve {
            points,
            tangents,
            normals,
            kappas,
            arc,
            closed,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn tangents(&self) -> &[Vec2] {
        &self.tangents
    }

    pub fn normals(&self) -> &[Vec2] {
        &self.normals
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn arc(&self) -> &[f64] {
        &self.arc
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Arc length covered by the samples; for closed curves this includes
    /// the wrap edge.
    pub fn total_arc(&self) -> f64 {
        let open_span = self.arc[self.len() - 1] - self.arc[0];
        if self.closed {
            open_span + self.points[self.len() - 1].dist(self.points[0])
        } else {
            open_span
        }
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edge_iter()
            .map(|(a, b)| a.dist(b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn edge_ratio(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (a, b) in self.edge_iter() {
            let l = a.dist(b);
            lo = lo.min(l);
            hi = hi.max(l);
        }
        hi / lo
    }

    fn edge_iter(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.len();
        let wrap = if self.closed { 1 } else { 0 };
        (0..n - 1 + wrap).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Signed enclosed area (shoelace); positive for counter-clockwise
    /// orientation. Only meaningful for closed curves.
    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            acc += a.cross(b);
        }
        0.5 * acc
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    /// Cubic Hermite position at arc-length coordinate `s` (clamped to the
    /// sampled span; wraps on closed curves).
    pub fn point_at_arc(&self, s: f64) -> Vec2 {
        let n = self.len();
        let s0 = self.arc[0];
        if self.closed {
            let period = self.total_arc();
            let mut u = (s - s0).rem_euclid(period);
            // wrap segment between the last and first sample
            let last_open = self.arc[n - 1] - s0;
            if u >= last_open {
                let h = period - last_open;
                let t = (u - last_open) / h;
                return hermite(
                    self.points[n - 1],
                    self.points[0],
                    self.tangents[n - 1] * h,
                    self.tangents[0] * h,
                    t,
                );
            }
            u += s0;
            return self.open_point_at(u);
        }
        self.open_point_at(s.clamp(s0, self.arc[n - 1]))
    }

    fn open_point_at(&self, s: f64) -> Vec2 {
        let i = match self.arc.binary_search_by(|a| a.total_cmp(&s)) {
            Ok(i) => return self.points[i],
            Err(i) => i.clamp(1, self.len() - 1),
        };
        let h = self.arc[i] - self.arc[i - 1];
        let t = (s - self.arc[i - 1]) / h;
        hermite(
            self.points[i - 1],
            self.points[i],
            self.tangents[i - 1] * h,
            self.tangents[i] * h,
            t,
        )
    }

    /// Resamples to `n` points uniformly spaced in arc length; endpoints are
    /// preserved for open curves. Frenet data is re-estimated from the new
    /// points.
    pub fn resample_uniform(&self, n: usize) -> Result<PlaneCurve, CurveError> {
        assert!(n >= 3);
        let total = self.total_arc();
        let s0 = self.arc[0];
        let pts: Vec<Vec2> = if self.closed {
            (0..n)
                .map(|i| self.point_at_arc(s0 + total * i as f64 / n as f64))
                .collect()
        } else {
            (0..n)
                .map(|i| self.point_at_arc(s0 + total * i as f64 / (n - 1) as f64))
                .collect()
        };
        PlaneCurve::from_points(pts, self.closed)
    }

    /// Closest point on the polyline to `p` together with its distance.
    pub fn project_point(&self, p: Vec2) -> (Vec2, f64) {
        let mut best = (self.points[0], f64::INFINITY);
        for (a, b) in self.edge_iter() {
            let q = project_to_segment(p, a, b);
            let d = q.dist(p);
            if d < best.1 {
                best = (q, d);
            }
        }
        best
    }

    /// Reverses orientation (flips tangents, normals and curvature sign).
    pub fn reversed(&self) -> PlaneCurve {
        let n = self.len();
        let s_last = self.arc[n - 1];
        PlaneCurve {
            points: self.points.iter().rev().copied().collect(),
            tangents: self.tangents.iter().rev().map(|&t| -t).collect(),
            normals: self.tangents.iter().rev().map(|&t| (-t).rot90()).collect(),
            kappas: self.kappas.iter().rev().map(|&k| -k).collect(),
            arc: self.arc.iter().rev().map(|&s| s_last - s).collect(),
            closed: self.closed,
        }
    }
}

/// Turning-angle curvature estimate: the signed angle between adjacent edges
/// divided by the mean of their lengths. Positive where the polyline bends
/// toward the counter-clockwise normal.
///
/// Closed polylines wrap; open ones copy the neighbouring interior value to
/// the two boundary samples.
pub fn turning_angle_curvature(points: &[Vec2], closed: bool) -> Result<Vec<f64>, CurveError> {
    let n = points.len();
    if n < 3 {
        return Err(CurveError::TooFewPoints { needed: 3, got: n });
    }
    let mut kappas = vec![0.0; n];
    let interior = if closed { 0..n } else { 1..n - 1 };
    for i in interior {
        let prev = points[(i + n - 1) % n];
        let here = points[i];
        let next = points[(i + 1) % n];
        let e0 = here - prev;
        let e1 = next - here;
        let l0 = e0.norm();
        let l1 = e1.norm();
        if l0 < MIN_EDGE_LENGTH || l1 < MIN_EDGE_LENGTH {
            return Err(CurveError::DegenerateEdge {
                index: i,
                length: l0.min(l1),
            });
        }
        let angle = e0.cross(e1).atan2(e0.dot(e1));
        kappas[i] = angle / (0.5 * (l0 + l1));
    }
    if !closed {
        kappas[0] = kappas[1];
        kappas[n - 1] = kappas[n - 2];
    }
    Ok(kappas)
}

fn hermite(p0: Vec2, p1: Vec2, m0: Vec2, m1: Vec2, t: f64) -> Vec2 {
    let t2 = t * t;
    let t3 = t2 * t;
    p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (t3 - 2.0 * t2 + t)
        + p1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * (t3 - t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    pub fn circle_points(radius: f64, n: usize) -> Vec<Vec2> {
        (0..n)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / n as f64;
                Vec2::new(radius * th.cos(), radius * th.sin())
            })
            .collect()
    }

    #[test]
    fn turning_angles_on_regular_polygon() {
        let pts = circle_points(1.0, 256);
        let kappas = turning_angle_curvature(&pts, true).unwrap();
        for k in kappas {
            assert!((k - 1.0).abs() < 1e-3, "kappa {k}");
        }
    }

    #[test]
    fn collinear_points_have_zero_curvature() {
        let pts: Vec<Vec2> = (0..10).map(|i| Vec2::new(i as f64 * 0.5, 2.0)).collect();
        let kappas = turning_angle_curvature(&pts, false).unwrap();
        assert!(kappas.iter().all(|&k| k == 0.0));
    }

    #[test]
    fn grim_reaper_graph_curvature_at_apex() {
        // y = log sec x has curvature cos x; sample uniformly in x
        let n = 401;
        let pts: Vec<Vec2> = (0..n)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                Vec2::new(x, -x.cos().ln())
            })
            .collect();
        let kappas = turning_angle_curvature(&pts, false).unwrap();
        let mid = n / 2;
        assert_eq!(pts[mid].x, 0.0);
        assert!((kappas[mid] - 1.0).abs() < 1e-3, "kappa {}", kappas[mid]);
    }

    #[test]
    fn degenerate_edge_detected() {
        let mut pts = circle_points(1.0, 16);
        pts[3] = pts[2];
        assert!(matches!(
            turning_angle_curvature(&pts, true),
            Err(CurveError::DegenerateEdge { .. })
        ));
    }

    #[test]
    fn from_points_circle_normals_point_inward() {
        let c = PlaneCurve::from_points(circle_points(2.0, 128), true).unwrap();
        for (p, n) in c.points().iter().zip(c.normals()) {
            // inward normal for the positively oriented circle
            assert!(p.normalized().dot(*n) < -0.99);
        }
        assert!(c.signed_area() > 0.0);
        assert_relative_eq!(c.signed_area(), 4.0 * PI, max_relative = 1e-2);
    }

    #[test]
    fn resample_preserves_circle_geometry() {
        let c = PlaneCurve::from_points(circle_points(1.0, 200), true).unwrap();
        let r = c.resample_uniform(157).unwrap();
        assert_eq!(r.len(), 157);
        for p in r.points() {
            assert_relative_eq!(p.norm(), 1.0, epsilon = 1e-4);
        }
        assert_relative_eq!(r.total_arc(), 2.0 * PI, max_relative = 1e-3);
    }

    #[test]
    fn projection_finds_nearest_point() {
        let c = PlaneCurve::from_points(circle_points(1.0, 512), true).unwrap();
        let (q, d) = c.project_point(Vec2::new(2.0, 0.0));
        assert_relative_eq!(d, 1.0, epsilon = 1e-3);
        assert_relative_eq!(q.x, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn reversal_flips_curvature_sign() {
        let c = PlaneCurve::from_points(circle_points(1.0, 64), true).unwrap();
        let r = c.reversed();
        assert!(c.kappas()[10] > 0.0);
        assert!(r.kappas()[10] < 0.0);
    }
}

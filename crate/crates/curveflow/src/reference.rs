//! Closed-form reference curves with exact arc-length curvature functions:
//! grim reaper, catenary, cycloid, parabola, circle, line, and a numeric
//! elastica produced by the soliton pipeline.

use crate::curve::PlaneCurve;
use crate::energy::CurvatureEnergy;
use crate::geom::Vec2;
use crate::soliton::{integrate_profile, reconstruct_curve, SolitonError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("arc-length span {span} exceeds the curve's maximal span {max_span}")]
    SpanExceeded { span: f64, max_span: f64 },
    #[error("scale parameter must be positive, got {0}")]
    BadScale(f64),
    #[error("need at least 16 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
}

/// The supported closed-form (plus one numeric) curve families. The span is
/// the arc-length half-width, measured from the vertex where one exists.
#[derive(Debug, Clone, Copy)]
pub enum ReferenceKind {
    /// `kappa(s) = sqrt(d) sech(sqrt(d) s)`; the curve `y = log sec x`
    /// rescaled by `1/sqrt(d)`.
    GrimReaper { d: f64, span: f64 },
    /// `y = c cosh(x/c)`; for c = 1, `kappa(s) = 1/(1 + s^2)`.
    Catenary { scale: f64, span: f64 },
    /// Rolling-circle radius r, arch opening downward (cusps up) so that
    /// curvature is positive; natural equation `rho^2 + s^2 = 16 r^2`,
    /// valid for |s| < 4r.
    Cycloid { r: f64, span: f64 },
    /// Graph `y = x^2 / 2`, reparameterized by arc length numerically.
    Parabola { span: f64 },
    /// Closed circle of radius R, positively oriented.
    Circle { radius: f64 },
    /// Straight segment along the x axis.
    Line { span: f64 },
    /// Critical curve of the unconstrained bending energy at level d,
    /// computed numerically by the soliton pipeline (no closed form here).
    Elastica { d: f64, span: f64 },
}

/// A reference curve together with exact curvature data.
pub struct ReferenceCurve {
    pub curve: PlaneCurve,
    /// Energy whose Euler-Lagrange equation the curve satisfies, when the
    /// family is critical for a fixed one (the circle is critical only at a
    /// matched lambda and carries none here).
    pub dictionary_energy: Option<CurvatureEnergy>,
    /// First-integral level of the dictionary energy, when applicable.
    pub d: Option<f64>,
    /// True when curvature data comes from a numeric profile rather than a
    /// closed form.
    pub numeric: bool,
    kind: ReferenceKind,
}

impl ReferenceCurve {
    /// Exact curvature at arc length s (vertex-centred where applicable).
    /// NaN for the numeric elastica; use the sampled curve there.
    pub fn kappa(&self, s: f64) -> f64 {
        kappa_jet(&self.kind, s).0
    }

    /// Exact d(kappa)/ds.
    pub fn kappa_s(&self, s: f64) -> f64 {
        kappa_jet(&self.kind, s).1
    }

    /// Exact second arc-length derivative of kappa.
    pub fn kappa_ss(&self, s: f64) -> f64 {
        kappa_jet(&self.kind, s).2
    }
}

fn kappa_jet(kind: &ReferenceKind, s: f64) -> (f64, f64, f64) {
    match *kind {
        ReferenceKind::GrimReaper { d, .. } => {
            let rd = d.sqrt();
            let u = rd * s;
            let k = rd / u.cosh();
            let t = u.tanh();
            (k, -rd * k * t, rd * rd * k * t * t - k * k * k)
        }
        ReferenceKind::Catenary { scale: c, .. } => {
            let q = c * c + s * s;
            (
                c / q,
                -2.0 * c * s / (q * q),
                2.0 * c * (3.0 * s * s - c * c) / (q * q * q),
            )
        }
        ReferenceKind::Cycloid { r, .. } => {
            let rho2 = 16.0 * r * r - s * s;
            (
                1.0 / rho2.sqrt(),
                s / rho2.powf(1.5),
                (rho2 + 3.0 * s * s) / rho2.powf(2.5),
            )
        }
        ReferenceKind::Parabola { .. } => {
            let x = parabola_x_of_s(s);
            let q = 1.0 + x * x;
            (
                q.powf(-1.5),
                -3.0 * x * q.powi(-3),
                (15.0 * x * x - 3.0) * q.powf(-4.5),
            )
        }
        ReferenceKind::Circle { radius } => (1.0 / radius, 0.0, 0.0),
        ReferenceKind::Line { .. } => (0.0, 0.0, 0.0),
        ReferenceKind::Elastica { .. } => (f64::NAN, f64::NAN, f64::NAN),
    }
}

/// Arc length of `y = x^2/2` from the vertex:
/// `s(x) = (x sqrt(1+x^2) + asinh x) / 2`.
fn parabola_s_of_x(x: f64) -> f64 {
    0.5 * (x * (1.0 + x * x).sqrt() + x.asinh())
}

/// Inverse of the parabola arc length by bisection plus a Newton polish.
fn parabola_x_of_s(s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let mut far = s.signum() * s.abs().min(1.0);
    while parabola_s_of_x(far).abs() < s.abs() {
        far *= 2.0;
    }
    let (mut lo, mut hi) = if s > 0.0 { (0.0, far) } else { (far, 0.0) };
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if parabola_s_of_x(mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        // s'(x) = sqrt(1 + x^2)
        x -= (parabola_s_of_x(x) - s) / (1.0 + x * x).sqrt();
    }
    x
}

/// Builds a reference curve with `n_samples` points uniformly spaced in arc
/// length and exact per-sample Frenet data.
pub fn make_reference(
    kind: ReferenceKind,
    n_samples: usize,
) -> Result<ReferenceCurve, ReferenceError> {
    if n_samples < 16 {
        return Err(ReferenceError::TooFewSamples(n_samples));
    }
    match kind {
        ReferenceKind::GrimReaper { d, span } => {
            check_scale(d)?;
            check_scale(span)?;
            let rd = d.sqrt();
            let curve = sample_open(n_samples, span, |s| {
                let u = rd * s;
                let pos = Vec2::new(gudermannian(u), u.cosh().ln()) / rd;
                let tan = Vec2::new(1.0 / u.cosh(), u.tanh());
                (pos, tan, rd / u.cosh())
            });
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(CurvatureEnergy::Entropy { lambda: 0.0 }),
                d: Some(d),
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Catenary { scale: c, span } => {
            check_scale(c)?;
            check_scale(span)?;
            let curve = sample_open(n_samples, span, |s| {
                let q = (c * c + s * s).sqrt();
                let pos = Vec2::new(c * (s / c).asinh(), q);
                let tan = Vec2::new(c, s) / q;
                (pos, tan, c / (q * q))
            });
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(CurvatureEnergy::Power {
                    exponent: 0.5,
                    lambda: 0.0,
                }),
                d: Some(0.25 / c),
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Cycloid { r, span } => {
            check_scale(r)?;
            if span >= 4.0 * r {
                return Err(ReferenceError::SpanExceeded {
                    span,
                    max_span: 4.0 * r,
                });
            }
            let curve = sample_open(n_samples, span, |s| {
                let theta = 2.0 * (-s / (4.0 * r)).acos();
                let pos = Vec2::new(r * (theta - theta.sin()), r * (theta.cos() - 1.0));
                let half = 0.5 * theta;
                let tan = Vec2::new(half.sin(), -half.cos());
                (pos, tan, 1.0 / (16.0 * r * r - s * s).sqrt())
            });
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(CurvatureEnergy::Power {
                    exponent: -1.0,
                    lambda: 0.0,
                }),
                d: Some(64.0 * r * r),
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Parabola { span } => {
            check_scale(span)?;
            let curve = sample_open(n_samples, span, |s| {
                let x = parabola_x_of_s(s);
                let q = (1.0 + x * x).sqrt();
                (
                    Vec2::new(x, 0.5 * x * x),
                    Vec2::new(1.0, x) / q,
                    1.0 / (q * q * q),
                )
            });
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(CurvatureEnergy::Power {
                    exponent: 1.0 / 3.0,
                    lambda: 0.0,
                }),
                d: Some(4.0 / 9.0),
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Circle { radius } => {
            check_scale(radius)?;
            let n = n_samples;
            let mut points = Vec::with_capacity(n);
            let mut tangents = Vec::with_capacity(n);
            let mut arc = Vec::with_capacity(n);
            for i in 0..n {
                let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                points.push(Vec2::new(radius * th.cos(), radius * th.sin()));
                tangents.push(Vec2::new(-th.sin(), th.cos()));
                arc.push(radius * th);
            }
            let curve =
                PlaneCurve::from_samples(points, tangents, vec![1.0 / radius; n], arc, true)
                    .expect("circle sampling is valid");
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: None,
                d: None,
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Line { span } => {
            check_scale(span)?;
            let curve = sample_open(n_samples, span, |s| {
                (Vec2::new(s, 0.0), Vec2::new(1.0, 0.0), 0.0)
            });
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(CurvatureEnergy::Power {
                    exponent: 0.0,
                    lambda: 0.0,
                }),
                d: None,
                numeric: false,
                kind,
            })
        }
        ReferenceKind::Elastica { d, span } => {
            check_scale(d)?;
            check_scale(span)?;
            let energy = CurvatureEnergy::Power {
                exponent: 2.0,
                lambda: 0.0,
            };
            let profile = integrate_profile(&energy, d, span, 1e-10)?;
            let dense = reconstruct_curve(&profile)?;
            let curve = dense
                .resample_uniform(n_samples)
                .map_err(SolitonError::from)?;
            Ok(ReferenceCurve {
                curve,
                dictionary_energy: Some(energy),
                d: Some(d),
                numeric: true,
                kind,
            })
        }
    }
}

fn check_scale(v: f64) -> Result<(), ReferenceError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ReferenceError::BadScale(v))
    }
}

fn sample_open<F>(n: usize, span: f64, f: F) -> PlaneCurve
where
    F: Fn(f64) -> (Vec2, Vec2, f64),
{
    let mut points = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut kappas = Vec::with_capacity(n);
    let mut arc = Vec::with_capacity(n);
    for i in 0..n {
        let s = -span + 2.0 * span * i as f64 / (n - 1) as f64;
        let (p, t, k) = f(s);
        points.push(p);
        tangents.push(t);
        kappas.push(k);
        arc.push(s);
    }
    PlaneCurve::from_samples(points, tangents, kappas, arc, false)
        .expect("valid reference sampling")
}

/// gd(u) = 2 atan(e^u) - pi/2, the antiderivative of sech.
pub fn gudermannian(u: f64) -> f64 {
    2.0 * u.exp().atan() - std::f64::consts::FRAC_PI_2
}

//! Direct numerical criticality test: the curvature functional by
//! quadrature and its first variation under compactly supported normal
//! bump perturbations.

use crate::curve::{CurveError, PlaneCurve};
use crate::energy::{evaluate, CurvatureEnergy, EnergyError};
use crate::geom::Vec2;
use crate::quad::simpson;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VariationError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(
        "bump support [{lo:.4}, {hi:.4}] leaves the curve's open arc interval ({s0:.4}, {s1:.4})"
    )]
    SupportExceedsCurve { lo: f64, hi: f64, s0: f64, s1: f64 },
    #[error("functional quadrature needs a uniform arc grid (spacing varies by {0:.3e})")]
    NonUniformGrid(f64),
}

/// A smooth bump `A exp(-1/(1-u^2))` for `u = (s - center)/radius`, `|u| < 1`,
/// identically zero outside. Compact support is exact: the profile and all
/// its derivatives vanish at the support boundary.
#[derive(Debug, Clone, Copy)]
pub struct BumpPerturbation {
    pub center: f64,
    pub radius: f64,
    pub amplitude: f64,
}

impl BumpPerturbation {
    pub fn new(center: f64, radius: f64, amplitude: f64) -> Self {
        assert!(radius > 0.0, "bump radius must be positive");
        BumpPerturbation {
            center,
            radius,
            amplitude,
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        let u = (s - self.center) / self.radius;
        if u.abs() < 1.0 {
            self.amplitude * (-1.0 / (1.0 - u * u)).exp()
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }
}

/// Integral of `P(kappa)` over the sampled arc by composite Simpson
/// quadrature (periodic form on closed curves). The sample grid must be
/// uniform in arc length; `perturb` re-parameterizes its output accordingly.
pub fn functional_value(
    curve: &PlaneCurve,
    energy: &CurvatureEnergy,
) -> Result<f64, VariationError> {
    let n = curve.len();
    let arc = curve.arc();
    let h = (arc[n - 1] - arc[0]) / (n - 1) as f64;
    let mut worst = 0.0f64;
    for i in 1..n {
        worst = worst.max(((arc[i] - arc[i - 1]) - h).abs());
    }
    if worst > 1e-6 * h {
        return Err(VariationError::NonUniformGrid(worst));
    }
    let mut values = Vec::with_capacity(n + 1);
    for &kappa in curve.kappas() {
        values.push(evaluate(energy, kappa)?.value);
    }
    if curve.closed() {
        // close the loop for the quadrature; the wrap edge has the same
        // spacing as the interior by the uniformity check above
        values.push(values[0]);
        Ok(simpson(&values, curve.total_arc() / n as f64))
    } else {
        Ok(simpson(&values, h))
    }
}

/// Displaces the curve by `sum_j eps_j * bump_j(s) * N(s)`, then
/// re-parameterizes by arc length and re-estimates the Frenet data (the
/// displaced curve is no longer unit-speed in the original parameter).
///
/// Disjoint bumps applied in one call perturb independent arc windows, which
/// keeps their first variations additive.
pub fn perturb_many(
    curve: &PlaneCurve,
    bumps: &[(BumpPerturbation, f64)],
) -> Result<PlaneCurve, VariationError> {
    let n = curve.len();
    let (s0, s1) = (curve.arc()[0], curve.arc()[n - 1]);
    for (bump, _) in bumps {
        let (lo, hi) = bump.support();
        if lo <= s0 || hi >= s1 {
            return Err(VariationError::SupportExceedsCurve { lo, hi, s0, s1 });
        }
    }
    if bumps.iter().all(|&(b, eps)| eps * b.amplitude == 0.0) {
        return Ok(curve.clone());
    }
    let points: Vec<Vec2> = curve
        .points()
        .iter()
        .zip(curve.normals())
        .zip(curve.arc())
        .map(|((&p, &nrm), &s)| {
            let offset: f64 = bumps.iter().map(|&(b, eps)| eps * b.value(s)).sum();
            p + nrm * offset
        })
        .collect();
    let displaced = PlaneCurve::from_points(points, curve.closed())?;
    Ok(displaced.resample_uniform(n)?)
}

/// Single-bump convenience wrapper around [`perturb_many`].
pub fn perturb(
    curve: &PlaneCurve,
    bump: &BumpPerturbation,
    epsilon: f64,
) -> Result<PlaneCurve, VariationError> {
    perturb_many(curve, &[(*bump, epsilon)])
}

/// Central-difference first variation
/// `[Theta(gamma_{+eps}) - Theta(gamma_{-eps})] / (2 eps)`.
///
/// The sign convention pairs positively with the Euler-Lagrange residual:
/// for a non-critical curve the value approximates
/// `integral(el_residual * bump) ds` with the counter-clockwise normal
/// convention (fixed by a discrete experiment on the unit circle, see the
/// module tests).
pub fn first_variation(
    curve: &PlaneCurve,
    energy: &CurvatureEnergy,
    bump: &BumpPerturbation,
    epsilon: f64,
) -> Result<f64, VariationError> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let plus = functional_value(&perturb(curve, bump, epsilon)?, energy)?;
    let minus = functional_value(&perturb(curve, bump, -epsilon)?, energy)?;
    Ok((plus - minus) / (2.0 * epsilon))
}

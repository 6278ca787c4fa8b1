//! Soliton curvature profiles from the Euler-Lagrange ODE and planar curve
//! reconstruction in the canonical frame.
//!
//! Profiles integrate the second-order form of the Euler-Lagrange equation,
//! `kappa_ss = (kappa P - kappa^2 dP - dddP kappa_s^2) / ddP`, which crosses
//! curvature turning points without the branch bookkeeping the square-root
//! form of the first integral would need; the first integral is monitored as
//! a conserved quantity instead.

use crate::curve::{CurveError, PlaneCurve};
use crate::energy::{
    self, curvature_range, evaluate, CurvatureEnergy, CurvatureRange, EnergyError, SolitonProblem,
};
use crate::geom::Vec2;
use crate::ode::{integrate_to_grid, OdeOptions, OdeStatus};
use crate::quad::{adaptive_gk, cumulative_simpson};
use thiserror::Error;

/// Curvature below this is treated as the convex-branch boundary; profiles
/// are truncated there (grim-reaper-type tails decay toward zero curvature).
pub const KAPPA_FLOOR: f64 = 1e-12;
/// Curvature above this is a cusp for desk-scale purposes (cycloid ends).
pub const KAPPA_CEILING: f64 = 1e6;

#[derive(Debug, Error)]
pub enum SolitonError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(
        "step size underflow at s = {at_s:.6} with kappa = {kappa:.6e}; the profile is stiff here"
    )]
    Stiffness { at_s: f64, kappa: f64 },
    #[error(
        "curvature {kappa:.6e} left the admissible range [{lo:.6e}, {hi:.6e}] at s = {at_s:.6}"
    )]
    DomainExit {
        at_s: f64,
        kappa: f64,
        lo: f64,
        hi: f64,
    },
    #[error("quadrature endpoint kappa = {kappa:.6e} sits on a root of d - (kappa dP - P)^2")]
    SingularEndpoint { kappa: f64 },
}

/// Why a profile ended before the requested half-span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Curvature reached the convex-branch floor.
    KappaFloor,
    /// Curvature blew up (cusp).
    KappaCeiling,
    /// The integrator stalled close to a domain boundary.
    StepUnderflow,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileSample {
    pub s: f64,
    pub kappa: f64,
    pub kappa_s: f64,
}

/// Arc-length-sampled soliton curvature record on a uniform grid.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub samples: Vec<ProfileSample>,
    pub d: f64,
    pub energy: CurvatureEnergy,
    /// Maximum observed |first_integral - d| across the samples.
    pub drift_max: f64,
    /// Present when integration stopped before the requested half-span.
    pub truncated: Option<Truncation>,
    grid_step: f64,
    vertex_index: usize,
}

impl CurvatureProfile {
    /// Index of the s = 0 sample (the curvature turning point the
    /// integration starts from).
    pub fn vertex_index(&self) -> usize {
        self.vertex_index
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn kappa_bounds(&self) -> (f64, f64) {
        self.samples.iter().fold((f64::INFINITY, 0.0f64), |acc, p| {
            (acc.0.min(p.kappa), acc.1.max(p.kappa))
        })
    }

    /// Achieved span on the negative and positive side of the vertex.
    pub fn achieved_span(&self) -> (f64, f64) {
        (
            -self.samples.first().map_or(0.0, |p| p.s),
            self.samples.last().map_or(0.0, |p| p.s),
        )
    }
}

struct SideRun {
    samples: Vec<ProfileSample>, // excludes the vertex sample
    truncated: Option<Truncation>,
}

fn el_rhs(energy: &CurvatureEnergy, kappa: f64, kappa_s: f64) -> [f64; 2] {
    match evaluate(energy, kappa) {
        Ok(jet) => {
            let num = kappa * jet.value - kappa * kappa * jet.d1 - jet.d3 * kappa_s * kappa_s;
            [kappa_s, num / jet.d2]
        }
        Err(_) => [f64::NAN, f64::NAN],
    }
}

fn run_side(
    energy: &CurvatureEnergy,
    range: &CurvatureRange,
    kappa0: f64,
    grid_step: f64,
    n_grid: usize,
    step_tol: f64,
) -> Result<SideRun, SolitonError> {
    let opts = OdeOptions {
        rel_tol: step_tol,
        abs_tol: step_tol,
        max_steps: 1_000_000,
    };
    let band_lo = range.lo - 1e3 * step_tol.max(1e-12) * range.lo.abs().max(1.0);
    let band_hi = if range.hi.is_finite() {
        range.hi + 1e3 * step_tol.max(1e-12) * range.hi.abs().max(1.0)
    } else {
        f64::INFINITY
    };
    let mut truncated = None;
    let mut exited: Option<(f64, f64)> = None;
    let rhs = |_s: f64, y: &[f64; 2]| el_rhs(energy, y[0], y[1]);
    let (states, status) =
        integrate_to_grid(rhs, 0.0, [kappa0, 0.0], grid_step, n_grid, &opts, |s, y| {
            if y[0] < KAPPA_FLOOR {
                truncated = Some(Truncation::KappaFloor);
                return false;
            }
            if y[0] > KAPPA_CEILING {
                truncated = Some(Truncation::KappaCeiling);
                return false;
            }
            if y[0] > band_hi || (y[0] < band_lo && !range.lo_open) {
                exited = Some((s, y[0]));
                return false;
            }
            true
        });
    if let Some((at_s, kappa)) = exited {
        return Err(SolitonError::DomainExit {
            at_s,
            kappa,
            lo: range.lo,
            hi: range.hi,
        });
    }
    let mut samples: Vec<ProfileSample> = states
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, y)| ProfileSample {
            s: grid_step * i as f64,
            kappa: y[0],
            kappa_s: y[1],
        })
        .collect();
    // a stopping sample past the convex branch is bookkeeping, not data
    if truncated.is_some() {
        while samples
            .last()
            .is_some_and(|p| p.kappa < KAPPA_FLOOR || p.kappa > KAPPA_CEILING)
        {
            samples.pop();
        }
    }
    match status {
        OdeStatus::Completed | OdeStatus::StoppedByMonitor => {}
        OdeStatus::StepUnderflow | OdeStatus::MaxSteps => {
            let last = samples
                .last()
                .map(|p| (p.s, p.kappa))
                .unwrap_or((0.0, kappa0));
            let near_floor = last.1 < 1e-6;
            let near_ceiling = last.1 > 1e-3 * KAPPA_CEILING;
            // unbounded ranges end in a cusp at finite arc length; stalling
            // on the way up is the expected truncation there
            let near_cusp = range.hi.is_infinite() && last.1 > 1.5 * range.vertex;
            let near_boundary = (last.1 - range.lo).abs() < 1e-6 * range.lo.abs().max(1.0)
                || (range.hi.is_finite()
                    && (last.1 - range.hi).abs() < 1e-6 * range.hi.abs().max(1.0));
            if near_floor || near_ceiling || near_cusp || near_boundary {
                truncated = Some(Truncation::StepUnderflow);
            } else {
                return Err(SolitonError::Stiffness {
                    at_s: last.0,
                    kappa: last.1,
                });
            }
        }
    }
    Ok(SideRun { samples, truncated })
}

/// Integrates the soliton curvature profile outward from the curvature
/// turning point `kappa(0) = vertex`, `kappa_s(0) = 0`, over
/// `s in [-half_span, half_span]`, on a uniform grid sized so that the
/// reconstructed polyline is unit-speed to about 1e-6.
pub fn integrate_profile(
    energy: &CurvatureEnergy,
    d: f64,
    half_span: f64,
    step_tol: f64,
) -> Result<CurvatureProfile, SolitonError> {
    assert!(half_span > 0.0, "half_span must be positive");
    assert!(step_tol > 0.0, "step_tol must be positive");
    let range = curvature_range(energy, d)?;
    let kappa0 = range.vertex;

    // exploratory pass to learn the curvature scale along the span
    let coarse = run_side(energy, &range, kappa0, half_span / 256.0, 256, 1e-8)?;
    let kappa_peak = coarse
        .samples
        .iter()
        .map(|p| p.kappa.abs())
        .fold(kappa0.abs(), f64::max);

    // chord/arc deficit is kappa^2 h^2 / 24; keep it under 1e-6
    let h_target = (2e-3f64)
        .min(4.4e-3 / kappa_peak)
        .max(half_span / 100_000.0);
    let n_side = (half_span / h_target).ceil() as usize;
    let h = half_span / n_side as f64;

    let pos = run_side(energy, &range, kappa0, h, n_side, step_tol)?;
    let neg = run_side(energy, &range, kappa0, -h, n_side, step_tol)?;

    let mut samples = Vec::with_capacity(pos.samples.len() + neg.samples.len() + 1);
    samples.extend(neg.samples.iter().rev().copied());
    let vertex_index = samples.len();
    samples.push(ProfileSample {
        s: 0.0,
        kappa: kappa0,
        kappa_s: 0.0,
    });
    samples.extend(pos.samples.iter().copied());

    let mut drift_max = 0.0f64;
    for p in &samples {
        let fi = energy::first_integral(energy, p.kappa, p.kappa_s)?;
        drift_max = drift_max.max((fi - d).abs());
    }

    Ok(CurvatureProfile {
        samples,
        d,
        energy: *energy,
        drift_max,
        truncated: pos.truncated.or(neg.truncated),
        grid_step: h,
        vertex_index,
    })
}

/// Rebuilds the plane curve of a profile in the canonical frame, where the
/// translational Killing field is `sqrt(d)` times the first axis and the
/// soliton translates along `V = (0, 1)`.
///
/// The second coordinate is algebraic, `x2 = -dP(kappa)/sqrt(d)`; the first
/// is the cumulative Simpson integral of `(kappa dP - P)/sqrt(d)` anchored
/// at the vertex. The sign of `x2` is chosen so that the counter-clockwise
/// normal convention recovers the profile curvature (`T' = kappa N`), which
/// keeps reconstructed solitons compatible with the polyline evolver.
pub fn reconstruct_curve(profile: &CurvatureProfile) -> Result<PlaneCurve, SolitonError> {
    let n = profile.samples.len();
    if n < 3 {
        return Err(SolitonError::Curve(CurveError::TooFewPoints {
            needed: 3,
            got: n,
        }));
    }
    let sqrt_d = profile.d.sqrt();
    let mut tang_comp = Vec::with_capacity(n); // kappa dP - P
    let mut x2 = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut kappas = Vec::with_capacity(n);
    let mut arc = Vec::with_capacity(n);
    for p in &profile.samples {
        let jet = evaluate(&profile.energy, p.kappa)?;
        let g = p.kappa * jet.d1 - jet.value;
        tang_comp.push(g);
        x2.push(-jet.d1 / sqrt_d);
        tangents.push(Vec2::new(g / sqrt_d, -jet.d2 * p.kappa_s / sqrt_d));
        kappas.push(p.kappa);
        arc.push(p.s);
    }

    let iv = profile.vertex_index;
    let h = profile.grid_step;
    let mut x1 = vec![0.0; n];
    if n - iv >= 2 {
        let right: Vec<f64> = tang_comp[iv..].iter().map(|g| g / sqrt_d).collect();
        for (j, v) in cumulative_simpson(&right, h).into_iter().enumerate() {
            x1[iv + j] = v;
        }
    }
    if iv >= 1 {
        let left: Vec<f64> = tang_comp[..=iv].iter().rev().map(|g| g / sqrt_d).collect();
        for (j, v) in cumulative_simpson(&left, h).into_iter().enumerate() {
            x1[iv - j] = -v;
        }
    }

    let points: Vec<Vec2> = x1.iter().zip(&x2).map(|(&x, &y)| Vec2::new(x, y)).collect();
    Ok(PlaneCurve::from_samples(
        points, tangents, kappas, arc, false,
    )?)
}

/// Curve sampled in the curvature parameter on the rising branch
/// (`kappa_s > 0`), using one quadrature per coordinate increment:
/// `dx1/dkappa = (kappa dP - P) |ddP| / (sqrt(d) sqrt(d - (kappa dP - P)^2))`
/// and algebraic `x2(kappa)`. Endpoints on a root of the radicand are nudged
/// inward by 1e-10 before the error is raised.
pub fn quadrature_parameterization(
    energy: &CurvatureEnergy,
    d: f64,
    kappa_lo: f64,
    kappa_hi: f64,
) -> Result<PlaneCurve, SolitonError> {
    assert!(kappa_lo < kappa_hi, "need kappa_lo < kappa_hi");
    let range = curvature_range(energy, d)?;
    if !range.contains(kappa_lo) || !range.contains(kappa_hi) {
        return Err(SolitonError::DomainExit {
            at_s: 0.0,
            kappa: if range.contains(kappa_lo) {
                kappa_hi
            } else {
                kappa_lo
            },
            lo: range.lo,
            hi: range.hi,
        });
    }
    let sqrt_d = d.sqrt();
    let radicand = |kappa: f64| -> f64 {
        let g = energy::killing_tangent(energy, kappa).unwrap_or(f64::NAN);
        d - g * g
    };
    let nudge = |kappa: f64, inward: f64| -> Result<f64, SolitonError> {
        if radicand(kappa) > 0.0 {
            return Ok(kappa);
        }
        let moved = kappa + inward * 1e-10 * kappa.abs().max(1.0);
        if radicand(moved) > 0.0 {
            Ok(moved)
        } else {
            Err(SolitonError::SingularEndpoint { kappa })
        }
    };
    let lo = nudge(kappa_lo, 1.0)?;
    let hi = nudge(kappa_hi, -1.0)?;

    let n = 801;
    let mut kappas = Vec::with_capacity(n);
    for i in 0..n {
        kappas.push(lo + (hi - lo) * i as f64 / (n - 1) as f64);
    }
    let dx1 = |kappa: f64| -> f64 {
        let jet = evaluate(energy, kappa).unwrap();
        let g = kappa * jet.d1 - jet.value;
        g * jet.d2.abs() / (sqrt_d * radicand(kappa).max(0.0).sqrt())
    };
    let ds = |kappa: f64| -> f64 {
        let jet = evaluate(energy, kappa).unwrap();
        jet.d2.abs() / radicand(kappa).max(0.0).sqrt()
    };

    let mut x1 = vec![0.0; n];
    let mut arc = vec![0.0; n];
    for i in 1..n {
        let (a, b) = (kappas[i - 1], kappas[i]);
        x1[i] = x1[i - 1] + adaptive_gk(&dx1, a, b, 1e-14, 1e-12, 200).value;
        arc[i] = arc[i - 1] + adaptive_gk(&ds, a, b, 1e-14, 1e-12, 200).value;
    }

    let mut points = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    for i in 0..n {
        let jet = evaluate(energy, kappas[i])?;
        let g = kappas[i] * jet.d1 - jet.value;
        points.push(Vec2::new(x1[i], -jet.d1 / sqrt_d));
        // kappa_s > 0 branch: ddP * kappa_s = sign(ddP) * sqrt(radicand)
        let x2_prime = -jet.d2.signum() * radicand(kappas[i]).max(0.0).sqrt() / sqrt_d;
        tangents.push(Vec2::new(g / sqrt_d, x2_prime));
    }
    Ok(PlaneCurve::from_samples(
        points, tangents, kappas, arc, false,
    )?)
}

/// Tangential and normal components of the translational Killing field at a
/// profile sample: `(kappa dP - P, ddP kappa_s)`. Their squared sum equals d.
pub fn killing_field(profile: &CurvatureProfile, index: usize) -> Result<(f64, f64), SolitonError> {
    let p = &profile.samples[index];
    let jet = evaluate(&profile.energy, p.kappa)?;
    Ok((p.kappa * jet.d1 - jet.value, jet.d2 * p.kappa_s))
}

/// Largest pointwise violation of the prescribed-curvature soliton equation
/// `speed_law(kappa) + b = a <N, V>` over the curve samples.
pub fn soliton_residual(curve: &PlaneCurve, problem: &SolitonProblem) -> Result<f64, SolitonError> {
    let mut worst = 0.0f64;
    for (kappa, normal) in curve.kappas().iter().zip(curve.normals()) {
        let lhs = problem.speed_law(*kappa)? + problem.b;
        let rhs = problem.a * normal.dot(problem.direction);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Arc-length derivatives of the sampled curvature by centred differences on
/// a possibly non-uniform grid. Boundary samples reuse their neighbour's
/// values; callers should trim a margin before using the estimates.
pub fn estimate_kappa_derivatives(curve: &PlaneCurve) -> (Vec<f64>, Vec<f64>) {
    let n = curve.len();
    let s = curve.arc();
    let k = curve.kappas();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = s[i] - s[i - 1];
        let h1 = s[i + 1] - s[i];
        d1[i] = (k[i + 1] * h0 * h0 - k[i - 1] * h1 * h1 + k[i] * (h1 * h1 - h0 * h0))
            / (h0 * h1 * (h0 + h1));
        d2[i] = 2.0 * (k[i - 1] * h1 + k[i + 1] * h0 - k[i] * (h0 + h1)) / (h0 * h1 * (h0 + h1));
    }
    if n >= 3 {
        d1[0] = d1[1];
        d1[n - 1] = d1[n - 2];
        d2[0] = d2[1];
        d2[n - 1] = d2[n - 2];
    }
    (d1, d2)
}

/// Least-squares translation direction: the V minimizing
/// `sum_i (speed_law(kappa_i) + b - a <N_i, V>)^2` over the samples.
///
/// For a true soliton this recovers the translation axis with |V| close to
/// one; for anything else the downstream residual check fails loudly. The
/// normal equations average measurement noise across all samples, which
/// keeps the estimate stable where pointwise Killing vectors are
/// ill-conditioned (powers with large |ddP|).
pub fn fit_translation_direction(
    curve: &PlaneCurve,
    problem: &SolitonProblem,
) -> Result<Vec2, SolitonError> {
    let n = curve.len();
    let margin = (n / 20).max(1);
    let (mut axx, mut axy, mut ayy) = (0.0f64, 0.0f64, 0.0f64);
    let mut rhs = Vec2::ZERO;
    for i in margin..n - margin {
        let nrm = curve.normals()[i];
        let target = (problem.speed_law(curve.kappas()[i])? + problem.b) / problem.a;
        axx += nrm.x * nrm.x;
        axy += nrm.x * nrm.y;
        ayy += nrm.y * nrm.y;
        rhs += nrm * target;
    }
    let det = axx * ayy - axy * axy;
    if det.abs() < 1e-9 * (axx + ayy).max(1.0) {
        return Err(SolitonError::Energy(EnergyError::NoSoliton(
            "normal directions are degenerate (straight line); translation direction is underdetermined".into(),
        )));
    }
    Ok(Vec2::new(
        (ayy * rhs.x - axy * rhs.y) / det,
        (axx * rhs.y - axy * rhs.x) / det,
    ))
}

/// Direction the curve translates along, recovered from the mean Killing
/// vector of the sampled geometry. For a true soliton the per-sample Killing
/// vectors agree; for anything else the mean direction is meaningless and
/// the residual check downstream will fail loudly.
pub fn canonical_direction(
    curve: &PlaneCurve,
    energy: &CurvatureEnergy,
) -> Result<Vec2, SolitonError> {
    let (kappa_s, _) = estimate_kappa_derivatives(curve);
    let n = curve.len();
    let margin = (n / 20).max(1);
    let mut acc = Vec2::ZERO;
    for (i, &ks) in kappa_s.iter().enumerate().take(n - margin).skip(margin) {
        let kappa = curve.kappas()[i];
        let jet = evaluate(energy, kappa)?;
        let g = kappa * jet.d1 - jet.value;
        acc += curve.tangents()[i] * g + curve.normals()[i] * (jet.d2 * ks);
    }
    let norm = acc.norm();
    if norm < 1e-12 {
        return Err(SolitonError::Energy(EnergyError::NoSoliton(
            "mean Killing vector vanishes; the curve is not close to a critical curve".into(),
        )));
    }
    Ok((acc / norm).rot90())
}

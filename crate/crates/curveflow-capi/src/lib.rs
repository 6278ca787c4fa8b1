//! C ABI for the curveflow library.
//!
//! Curves are opaque handles created and destroyed by this library; data
//! crosses the boundary through caller-provided buffers. Every fallible
//! call returns a [`CfStatus`]; the codes mirror the CLI exit contract
//! (0 ok, 2 no solution, 3 domain violation, 4 stability).
//!
//! The C header is generated into `include/curveflow.h` at build time.

use curveflow::energy::{
    energy_from_flow, evaluate, flow_from_energy, CurvatureEnergy, EnergyError, FlowMode,
    SolitonProblem,
};
use curveflow::flow::{evolve, fit_translation, Boundary, FlowConfig, FlowError};
use curveflow::geom::Vec2;
use curveflow::soliton::{integrate_profile, reconstruct_curve, soliton_residual, SolitonError};
use curveflow::PlaneCurve;
use std::os::raw::c_char;

/// Result of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    /// Success.
    Ok = 0,
    /// Invalid argument (null pointer, non-finite number, bad buffer size).
    Invalid = 1,
    /// No nonconstant soliton exists for the requested constants.
    NoSoliton = 2,
    /// Curvature left the admissible domain of the integrand or speed law.
    Domain = 3,
    /// A stability or stiffness limit stopped the computation.
    Stability = 4,
}

/// An immutable sampled plane curve (opaque).
pub struct CfCurve {
    inner: PlaneCurve,
}

/// Translation fit of a trajectory against its initial state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CfFit {
    pub vx: f64,
    pub vy: f64,
    pub shape_residual: f64,
    pub linearity_residual: f64,
}

/// Value and first three curvature derivatives of an integrand.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CfJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

fn status_of_energy(e: &EnergyError) -> CfStatus {
    match e {
        EnergyError::Domain { .. } => CfStatus::Domain,
        EnergyError::Degenerate(_) | EnergyError::NoSoliton(_) => CfStatus::NoSoliton,
    }
}

fn status_of_soliton(e: &SolitonError) -> CfStatus {
    match e {
        SolitonError::Energy(inner) => status_of_energy(inner),
        SolitonError::Stiffness { .. } => CfStatus::Stability,
        SolitonError::DomainExit { .. }
        | SolitonError::SingularEndpoint { .. }
        | SolitonError::Curve(_) => CfStatus::Domain,
    }
}

fn status_of_flow(e: &FlowError) -> CfStatus {
    match e {
        FlowError::StepTooLarge { .. } => CfStatus::Stability,
        FlowError::Energy(inner) => status_of_energy(inner),
        FlowError::Curve(_) => CfStatus::Domain,
        _ => CfStatus::Invalid,
    }
}

fn mode_from(log_mode: bool, p: f64) -> Option<FlowMode> {
    if log_mode {
        Some(FlowMode::Log)
    } else if p.is_finite() {
        Some(FlowMode::Power(p))
    } else {
        None
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cf_status_message(status: CfStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        CfStatus::Ok => b"ok\0",
        CfStatus::Invalid => b"invalid argument\0",
        CfStatus::NoSoliton => b"no nonconstant soliton for these constants\0",
        CfStatus::Domain => b"curvature outside the admissible domain\0",
        CfStatus::Stability => b"stability or stiffness limit reached\0",
    };
    text.as_ptr() as *const c_char
}

/// Builds the translating soliton of the flow `(kappa^p + b)/a` (or the
/// logarithmic law when `log_mode` is set) at first-integral level `d`,
/// over `s` in `[-half_span, half_span]`. On success `*out` owns a new
/// curve handle.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_soliton_build(
    log_mode: bool,
    p: f64,
    b: f64,
    d: f64,
    half_span: f64,
    tol: f64,
    out: *mut *mut CfCurve,
) -> CfStatus {
    let params_valid = half_span > 0.0
        && half_span.is_finite()
        && tol > 0.0
        && tol.is_finite()
        && d > 0.0
        && d.is_finite()
        && b.is_finite();
    if out.is_null() || !params_valid {
        return CfStatus::Invalid;
    }
    let Some(mode) = mode_from(log_mode, p) else {
        return CfStatus::Invalid;
    };
    let seed = match SolitonProblem::new(mode, 1.0, b, Vec2::new(0.0, 1.0)) {
        Ok(s) => s,
        Err(e) => return status_of_energy(&e),
    };
    let energy = energy_from_flow(&seed);
    if let Err(e) = flow_from_energy(&energy, d) {
        return status_of_energy(&e);
    }
    let profile = match integrate_profile(&energy, d, half_span, tol) {
        Ok(p) => p,
        Err(e) => return status_of_soliton(&e),
    };
    match reconstruct_curve(&profile) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(CfCurve { inner: curve }));
            CfStatus::Ok
        }
        Err(e) => status_of_soliton(&e),
    }
}

/// Builds a curve handle from raw xy samples. `closed` marks a closed
/// polyline (the wrap edge is implied, do not repeat the first point).
///
/// # Safety
/// `xs` and `ys` must point to `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_from_points(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    closed: bool,
    out: *mut *mut CfCurve,
) -> CfStatus {
    if xs.is_null() || ys.is_null() || out.is_null() || n < 3 {
        return CfStatus::Invalid;
    }
    let xs = std::slice::from_raw_parts(xs, n);
    let ys = std::slice::from_raw_parts(ys, n);
    let points: Vec<Vec2> = xs.iter().zip(ys).map(|(&x, &y)| Vec2::new(x, y)).collect();
    match PlaneCurve::from_points(points, closed) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(CfCurve { inner: curve }));
            CfStatus::Ok
        }
        Err(_) => CfStatus::Domain,
    }
}

/// Releases a curve handle. Null is ignored.
///
/// # Safety
/// `curve` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_free(curve: *mut CfCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of samples in the curve; 0 for null.
///
/// # Safety
/// `curve` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_len(curve: *const CfCurve) -> usize {
    if curve.is_null() {
        0
    } else {
        (*curve).inner.len()
    }
}

/// Whether the curve is a closed polyline.
///
/// # Safety
/// `curve` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_is_closed(curve: *const CfCurve) -> bool {
    !curve.is_null() && (*curve).inner.closed()
}

/// Copies per-sample data into caller buffers. Any of the buffer pointers
/// may be null to skip that column; non-null buffers must hold `cap`
/// doubles and `cap` must cover the whole curve.
///
/// # Safety
/// Non-null buffers must be writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_samples(
    curve: *const CfCurve,
    arc: *mut f64,
    x: *mut f64,
    y: *mut f64,
    kappa: *mut f64,
    cap: usize,
) -> CfStatus {
    if curve.is_null() {
        return CfStatus::Invalid;
    }
    let inner = &(*curve).inner;
    let n = inner.len();
    if cap < n {
        return CfStatus::Invalid;
    }
    for i in 0..n {
        if !arc.is_null() {
            *arc.add(i) = inner.arc()[i];
        }
        if !x.is_null() {
            *x.add(i) = inner.points()[i].x;
        }
        if !y.is_null() {
            *y.add(i) = inner.points()[i].y;
        }
        if !kappa.is_null() {
            *kappa.add(i) = inner.kappas()[i];
        }
    }
    CfStatus::Ok
}

/// Largest violation of the prescribed-curvature soliton equation
/// `speed_law(kappa) + b = a <N, V>` over the samples, with `V = (vx, vy)`.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_soliton_residual(
    curve: *const CfCurve,
    log_mode: bool,
    p: f64,
    a: f64,
    b: f64,
    vx: f64,
    vy: f64,
    out: *mut f64,
) -> CfStatus {
    if curve.is_null() || out.is_null() {
        return CfStatus::Invalid;
    }
    let Some(mode) = mode_from(log_mode, p) else {
        return CfStatus::Invalid;
    };
    let problem = match SolitonProblem::new(mode, a, b, Vec2::new(vx, vy)) {
        Ok(pr) => pr,
        Err(e) => return status_of_energy(&e),
    };
    match soliton_residual(&(*curve).inner, &problem) {
        Ok(r) => {
            *out = r;
            CfStatus::Ok
        }
        Err(e) => status_of_soliton(&e),
    }
}

/// Evolves a curve under the flow `(speed_law(kappa) + b)/a` to `t_end`
/// and reports the translation fit of the trajectory. On success
/// `*out_final` owns the final state.
///
/// # Safety
/// `initial` must be a live handle; `out_final` and `out_fit` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_flow_evolve(
    initial: *const CfCurve,
    log_mode: bool,
    p: f64,
    a: f64,
    b: f64,
    t_end: f64,
    cfl: f64,
    interior_margin: f64,
    out_final: *mut *mut CfCurve,
    out_fit: *mut CfFit,
) -> CfStatus {
    if initial.is_null() || out_final.is_null() || out_fit.is_null() {
        return CfStatus::Invalid;
    }
    let Some(mode) = mode_from(log_mode, p) else {
        return CfStatus::Invalid;
    };
    let problem = match SolitonProblem::new(mode, a, b, Vec2::new(0.0, 1.0)) {
        Ok(pr) => pr,
        Err(e) => return status_of_energy(&e),
    };
    let state = &(*initial).inner;
    let mut config = FlowConfig::new(problem, t_end);
    config.cfl = cfl;
    config.boundary = if state.closed() {
        Boundary::Closed
    } else {
        Boundary::FreeEnds
    };
    let trajectory = match evolve(state, &config) {
        Ok(t) => t,
        Err(e) => return status_of_flow(&e),
    };
    let fit = match fit_translation(&trajectory, interior_margin) {
        Ok(f) => f,
        Err(e) => return status_of_flow(&e),
    };
    *out_fit = CfFit {
        vx: fit.v_est.x,
        vy: fit.v_est.y,
        shape_residual: fit.shape_residual,
        linearity_residual: fit.linearity_residual,
    };
    let last = trajectory.states.into_iter().last().expect("nonempty");
    *out_final = Box::into_raw(Box::new(CfCurve { inner: last }));
    CfStatus::Ok
}

/// Evaluates an integrand jet. `kind` selects the family: 0 power
/// (`kappa^p + lambda`), 1 entropy (`kappa log kappa + lambda`), 2 log
/// (`log kappa + lambda`); `p` is read for the power family only.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_energy_evaluate(
    kind: u32,
    p: f64,
    lambda: f64,
    kappa: f64,
    out: *mut CfJet,
) -> CfStatus {
    if out.is_null() || !lambda.is_finite() {
        return CfStatus::Invalid;
    }
    let energy = match kind {
        0 if p.is_finite() => CurvatureEnergy::Power {
            exponent: p,
            lambda,
        },
        1 => CurvatureEnergy::Entropy { lambda },
        2 => CurvatureEnergy::Log { lambda },
        _ => return CfStatus::Invalid,
    };
    match evaluate(&energy, kappa) {
        Ok(jet) => {
            *out = CfJet {
                value: jet.value,
                d1: jet.d1,
                d2: jet.d2,
                d3: jet.d3,
            };
            CfStatus::Ok
        }
        Err(e) => status_of_energy(&e),
    }
}

//! Numerical laboratory for curvature-driven flows of planar curves and
//! their translating solitons.
//!
//! The crate has two halves that meet in the middle:
//!
//! * a variational side ([`energy`], [`soliton`], [`variation`]) that builds
//!   critical curves of curvature energies `P(kappa) = kappa^p + lambda`,
//!   `kappa log kappa + lambda` and `log kappa + lambda` from their
//!   Euler-Lagrange equation and first integral, and
//! * a dynamical side ([`flow`]) that evolves polylines under the normal
//!   speed laws `(kappa^p + b)/a` and `(log kappa + b)/a` and detects
//!   translating behaviour.
//!
//! The two are tied together by the dictionary in [`energy`]: solitons of a
//! flow are exactly the critical curves of the matched energy, and the
//! [`reference`] module carries the classical closed-form instances (grim
//! reaper, catenary, cycloid, parabola, circle, line) used to cross-check
//! both sides.

pub mod curve;
pub mod energy;
pub mod flow;
pub mod geom;
pub mod io;
pub mod ode;
pub mod quad;
pub mod reference;
pub mod soliton;
pub mod variation;

pub use curve::{CurveError, PlaneCurve};
pub use energy::{
    curvature_range, el_residual, energy_from_flow, evaluate, first_integral, flow_from_energy,
    CurvatureEnergy, CurvatureRange, EnergyError, EnergyJet, FlowMode, SolitonProblem,
};
pub use flow::{
    estimate_curvature, evolve, fit_translation, normal_speed, step, FlowConfig, Trajectory,
};
pub use geom::Vec2;
pub use reference::{make_reference, ReferenceCurve, ReferenceKind};
pub use soliton::{
    integrate_profile, killing_field, quadrature_parameterization, reconstruct_curve,
    soliton_residual, CurvatureProfile, SolitonError,
};
pub use variation::{first_variation, functional_value, perturb, BumpPerturbation};

//! Characteristic geometry of volume-form sigma models on two-dimensional
//! targets.
//!
//! Maps from a (1+3)-dimensional Lorentzian base into a Riemannian surface,
//! governed by a Lagrangian in the single strain invariant `sigma_2`, evolve
//! by a quasilinear second-order system. This crate evaluates everything
//! that system's wave propagation depends on, pointwise on analytic
//! backgrounds:
//!
//! - pulled-back metric, strain and elementary symmetric invariants
//!   ([`geometry`]);
//! - the pullback area two-form, its Hodge dual and the scalar contractions
//!   that tie it to `sigma_2` ([`geometry::two_form`]);
//! - Lagrangian families with exact derivatives and the nonlinearity
//!   parameter `xi = 2 L'' / L'` ([`model`]);
//! - principal part, principal symbol, the quartic characteristic
//!   polynomial and its factorization into two quadratic cone forms, with
//!   determinant and inertia diagnostics ([`mod@symbol`]);
//! - bicharacteristic rays of either cone branch with conservation
//!   monitoring ([`rays`]);
//! - a catalog of analytic background maps and target geometries
//!   ([`background`]).
//!
//! The headline diagnostic: for every model in this family the first cone
//! form is singular wherever the pullback two-form is nonzero, so pointwise
//! verdicts come out not hyperbolic even on exact solutions.

pub mod background;
pub mod geometry;
pub mod model;
pub mod rays;
pub mod symbol;

pub use background::{
    fd_check, jet_eval, Background, BackgroundError, BackgroundField, TargetGeometry,
};
pub use geometry::{
    cayley_hamilton_residual, flux_derivatives, hodge_dual, pullback_metric, pullback_two_form,
    strain_and_invariants, FluxDerivatives, JetSample, MetricError, MetricSample, PullbackForm,
    StrainData, TargetMetricSample,
};
pub use model::{LagrangianModel, ModelError, ModelEval, ModelFamily};
pub use rays::{
    integrate_ray, null_project, Branch, ConstantForm, FormField, NullProjection, RayError,
    RayState, RayTrace, RootKind, RootSelect, StepControls, Termination,
};
pub use symbol::{
    char_poly, degeneracy_report, determinant_identity, eom_residual, factorization_residual,
    principal_part, quadratic_forms, quartic_form, symbol, DeterminantIdentity, EomError, Inertia,
    PointVerdict, PrincipalPart, QuadraticForm, QuarticForm, DEFAULT_RANK_TOL,
};

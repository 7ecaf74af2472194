//! First-jet tensor algebra on maps from a Lorentzian four-dimensional base
//! into a Riemannian surface: pulled-back metric, strain invariants, the
//! pullback area two-form and its Hodge dual.

pub mod conventions;
pub mod flux;
pub mod jet;
pub mod metric;
pub mod strain;
pub mod two_form;

pub use conventions::{BASE_DIM, TARGET_DIM};
pub use flux::{flux_derivatives, FluxDerivatives, FluxError};
pub use jet::{JetError, JetSample};
pub use metric::{MetricError, MetricSample, TargetMetricSample};
pub use strain::{cayley_hamilton_residual, pullback_metric, strain_and_invariants, StrainData};
pub use two_form::{hodge_dual, pullback_two_form, PullbackForm};

/// Planar identity-like map used as the crate's worked example: the two
/// target components copy the first two spatial coordinates on a flat base
/// and target.
#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;
    use nalgebra::{Matrix2x4, Vector2, Vector4};

    pub fn w1_jet() -> (JetSample, TargetMetricSample, MetricSample) {
        let mut jac = Matrix2x4::zeros();
        jac[(0, 1)] = 1.0;
        jac[(1, 2)] = 1.0;
        let jet = JetSample::first_order(Vector4::zeros(), Vector2::zeros(), jac);
        (jet, TargetMetricSample::euclidean(), MetricSample::minkowski())
    }
}

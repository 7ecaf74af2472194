//! The pullback of the target area form and its Hodge dual.

use nalgebra::Matrix4;

use super::conventions::perm_sign_4;
use super::jet::JetSample;
use super::metric::{symmetric_part_4, MetricSample, TargetMetricSample};

/// An antisymmetric two-form on the base with its raised, squared and
/// contracted variants.
///
/// For a form pulled back from a two-dimensional target, `hh` equals twice
/// the second strain invariant and `hdh` vanishes to round-off; for a
/// generic antisymmetric form both are unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackForm {
    /// `H_ab`.
    pub h_lower: Matrix4<f64>,
    /// `H^a_b = g^{ac} H_cb`.
    pub h_mixed: Matrix4<f64>,
    /// `H^{ab}`.
    pub h_upper: Matrix4<f64>,
    /// `(H^2)^a_b = H^a_c H^c_b`.
    pub hsq_mixed: Matrix4<f64>,
    /// `H_ab H^{ab}`.
    pub hh: f64,
    /// `H_ab (*H)^{ab}`.
    pub hdh: f64,
}

impl PullbackForm {
    /// Derives all raised and contracted variants of an antisymmetric
    /// two-form; the input need not come from a map.
    pub fn from_antisymmetric(h_lower: Matrix4<f64>, g: &MetricSample) -> Self {
        let h_mixed = g.g_upper() * h_lower;
        let h_upper = h_mixed * g.g_upper();
        let hsq_mixed = h_mixed * h_mixed;
        let dual = dual_upper(&h_lower, g);
        let mut hh = 0.0;
        let mut hdh = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                hh += h_lower[(a, b)] * h_upper[(a, b)];
                hdh += h_lower[(a, b)] * dual[(a, b)];
            }
        }
        Self {
            h_lower,
            h_mixed,
            h_upper,
            hsq_mixed,
            hh,
            hdh,
        }
    }

    /// Raised square `H^a_c H^{cb}`, symmetric by construction.
    pub fn hsq_upper(&self) -> Matrix4<f64> {
        symmetric_part_4(&(self.h_mixed * self.h_upper))
    }
}

/// Pullback area two-form `H_ab = eps_AB jac^A_a jac^B_b` with all derived
/// variants.
pub fn pullback_two_form(
    jet: &JetSample,
    h: &TargetMetricSample,
    g: &MetricSample,
) -> PullbackForm {
    let s = h.sqrt_det();
    let j = &jet.jac;
    let mut h_lower = Matrix4::zeros();
    for a in 0..4 {
        for b in (a + 1)..4 {
            let v = s * (j[(0, a)] * j[(1, b)] - j[(1, a)] * j[(0, b)]);
            h_lower[(a, b)] = v;
            h_lower[(b, a)] = -v;
        }
    }
    PullbackForm::from_antisymmetric(h_lower, g)
}

/// Hodge dual `(*H)^{ab} = eta^{abcd} H_cd / 2` of an antisymmetric form.
///
/// Applying the dual twice (lowering in between) gives `-H^{ab}`.
pub fn hodge_dual(form: &PullbackForm, g: &MetricSample) -> Matrix4<f64> {
    dual_upper(&form.h_lower, g)
}

pub(crate) fn dual_upper(h_lower: &Matrix4<f64>, g: &MetricSample) -> Matrix4<f64> {
    let weight = -1.0 / g.sqrt_neg_det();
    let mut out = Matrix4::zeros();
    for a in 0..4 {
        for b in (a + 1)..4 {
            let mut v = 0.0;
            for c in 0..4 {
                for d in (c + 1)..4 {
                    let sign = perm_sign_4([a, b, c, d]);
                    if sign != 0.0 {
                        v += sign * h_lower[(c, d)];
                    }
                }
            }
            out[(a, b)] = weight * v;
            out[(b, a)] = -weight * v;
        }
    }
    out
}

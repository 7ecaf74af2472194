//! Base-space derivatives of the flux ingredients `sigma_2(x)` and
//! `H^{ab}(x)` through the second jet.
//!
//! Used by the field-equation residual and by analytic cone-form gradients
//! along rays. The base metric is chart-constant; the target metric may vary
//! along the map when its chart derivative is supplied.

use nalgebra::{Matrix2, Matrix4, Vector4};
use thiserror::Error;

use super::jet::JetSample;
use super::metric::{MetricSample, TargetMetricSample};

#[derive(Debug, Error, PartialEq)]
pub enum FluxError {
    #[error("second derivatives required: jet carries no hessian")]
    MissingHessian,
}

/// First base derivatives of the flux ingredients at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxDerivatives {
    /// `d sigma_2 / d x^a`.
    pub d_sigma2: Vector4<f64>,
    /// `d H^{bc} / d x^a`, one antisymmetric matrix per base direction.
    pub d_h_upper: [Matrix4<f64>; 4],
}

/// Chain-rule derivatives of `sigma_2` and `H^{ab}` from a second-order jet.
///
/// `dh` holds the target-chart derivative of the metric, one matrix
/// `d h_AB / d y^C` per target direction; pass `None` for a chart-constant
/// target metric.
pub fn flux_derivatives(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    dh: Option<&[Matrix2<f64>; 2]>,
) -> Result<FluxDerivatives, FluxError> {
    let hess = jet.hessian().ok_or(FluxError::MissingHessian)?;
    let g_up = g.g_upper();
    let j = &jet.jac;

    // w[(b, P)] = g^{bc} jac^P_c and its base derivative per direction a.
    let w = g_up * j.transpose();
    let dw_at = |a: usize, b: usize, p: usize, hess: &[Matrix4<f64>; 2]| -> f64 {
        let mut v = 0.0;
        for e in 0..4 {
            v += g_up[(b, e)] * hess[p][(e, a)];
        }
        v
    };

    // m^{PQ} = jac^P_c g^{cd} jac^Q_d and its derivatives.
    let m = j * w;
    let det_m = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];

    // Target-metric contribution along the map.
    let det_h = h.det();
    let sqrt_det_h = h.sqrt_det();
    let h_up = h.h_upper();
    let mut d_det_h = Vector4::zeros();
    if let Some(dh) = dh {
        for a in 0..4 {
            let mut dha = Matrix2::zeros();
            for c in 0..2 {
                dha += dh[c] * j[(c, a)];
            }
            // d det(h) = det(h) tr(h^{-1} dh)
            let trace = h_up[(0, 0)] * dha[(0, 0)]
                + h_up[(0, 1)] * dha[(1, 0)]
                + h_up[(1, 0)] * dha[(0, 1)]
                + h_up[(1, 1)] * dha[(1, 1)];
            d_det_h[a] = det_h * trace;
        }
    }

    let mut d_sigma2 = Vector4::zeros();
    let mut d_h_upper = [Matrix4::zeros(); 4];
    for a in 0..4 {
        // dm^{PQ} along direction a.
        let mut dm = Matrix2::zeros();
        for p in 0..2 {
            for q in 0..2 {
                let mut v = 0.0;
                for e in 0..4 {
                    v += hess[p][(e, a)] * w[(e, q)] + w[(e, p)] * hess[q][(e, a)];
                }
                dm[(p, q)] = v;
            }
        }
        let d_det_m = dm[(0, 0)] * m[(1, 1)] + m[(0, 0)] * dm[(1, 1)]
            - dm[(0, 1)] * m[(1, 0)]
            - m[(0, 1)] * dm[(1, 0)];
        d_sigma2[a] = d_det_h[a] * det_m + det_h * d_det_m;

        // H^{bc} = sqrt(det h) (w^b_0 w^c_1 - w^b_1 w^c_0).
        let d_sqrt = d_det_h[a] / (2.0 * sqrt_det_h);
        let mut dm4 = Matrix4::zeros();
        for b in 0..4 {
            for c in (b + 1)..4 {
                let bare = w[(b, 0)] * w[(c, 1)] - w[(b, 1)] * w[(c, 0)];
                let d_bare = dw_at(a, b, 0, hess) * w[(c, 1)] + w[(b, 0)] * dw_at(a, c, 1, hess)
                    - dw_at(a, b, 1, hess) * w[(c, 0)]
                    - w[(b, 1)] * dw_at(a, c, 0, hess);
                let v = d_sqrt * bare + sqrt_det_h * d_bare;
                dm4[(b, c)] = v;
                dm4[(c, b)] = -v;
            }
        }
        d_h_upper[a] = dm4;
    }

    Ok(FluxDerivatives {
        d_sigma2,
        d_h_upper,
    })
}

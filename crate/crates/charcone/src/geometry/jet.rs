//! First (and optionally second) derivative data of the map at a base point.

use nalgebra::{Matrix2x4, Matrix4, Vector2, Vector4};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum JetError {
    #[error("hessian of target component {component} is not symmetric in its base indices (asymmetry {asymmetry:.3e})")]
    AsymmetricHessian { component: usize, asymmetry: f64 },
}

/// Value and derivatives of the map at one base point.
///
/// `jac[(A, a)]` holds the partial derivative of target component `A` along
/// base direction `a`. The Hessian, when present, stores one symmetric 4x4
/// matrix of second base derivatives per target component.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSample {
    pub x: Vector4<f64>,
    pub phi: Vector2<f64>,
    pub jac: Matrix2x4<f64>,
    hess: Option<[Matrix4<f64>; 2]>,
}

impl JetSample {
    /// A first-order jet; sufficient for every pointwise invariant.
    pub fn first_order(x: Vector4<f64>, phi: Vector2<f64>, jac: Matrix2x4<f64>) -> Self {
        Self {
            x,
            phi,
            jac,
            hess: None,
        }
    }

    /// A second-order jet. The Hessian components must be symmetric.
    pub fn with_hessian(
        x: Vector4<f64>,
        phi: Vector2<f64>,
        jac: Matrix2x4<f64>,
        hess: [Matrix4<f64>; 2],
    ) -> Result<Self, JetError> {
        for (component, m) in hess.iter().enumerate() {
            let scale = m.amax().max(1.0);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let asymmetry = (m[(i, j)] - m[(j, i)]).abs() / scale;
                    if asymmetry > 1e-9 {
                        return Err(JetError::AsymmetricHessian {
                            component,
                            asymmetry,
                        });
                    }
                }
            }
        }
        Ok(Self {
            x,
            phi,
            jac,
            hess: Some(hess),
        })
    }

    pub fn hessian(&self) -> Option<&[Matrix4<f64>; 2]> {
        self.hess.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_hessian() {
        let mut h = Matrix4::zeros();
        h[(0, 1)] = 1.0;
        let err = JetSample::with_hessian(
            Vector4::zeros(),
            Vector2::zeros(),
            Matrix2x4::zeros(),
            [h, Matrix4::zeros()],
        )
        .unwrap_err();
        assert!(matches!(err, JetError::AsymmetricHessian { component: 0, .. }));
    }

    #[test]
    fn keeps_symmetric_hessian() {
        let mut h = Matrix4::zeros();
        h[(0, 1)] = 1.0;
        h[(1, 0)] = 1.0;
        let jet = JetSample::with_hessian(
            Vector4::zeros(),
            Vector2::zeros(),
            Matrix2x4::zeros(),
            [h, Matrix4::zeros()],
        )
        .unwrap();
        assert!(jet.hessian().is_some());
    }
}

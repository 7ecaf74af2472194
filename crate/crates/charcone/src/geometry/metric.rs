//! Pointwise samples of the base and target metrics.
//!
//! A sample carries the metric components together with the inverse and the
//! volume weight, validated once at construction so that downstream tensor
//! algebra never has to re-check signatures.

use nalgebra::{Matrix2, Matrix4};
use thiserror::Error;

use super::conventions::perm_sign_4;

/// Relative tolerance for symmetry and signature validation.
const VALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("metric matrix must be symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("metric matrix is singular")]
    Singular,
    #[error("base metric must have signature (+,-,-,-), found ({plus} positive, {zero} null, {minus} negative)")]
    NotLorentzian { plus: usize, zero: usize, minus: usize },
    #[error("target metric must be positive definite")]
    NotPositiveDefinite,
}

fn relative_asymmetry_4(m: &Matrix4<f64>) -> f64 {
    let scale = m.amax().max(1.0);
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Base metric at a point: components, inverse and volume weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    g_lower: Matrix4<f64>,
    g_upper: Matrix4<f64>,
    det: f64,
    sqrt_neg_det: f64,
}

impl MetricSample {
    /// Validates symmetry and the (+,-,-,-) signature, then caches the
    /// inverse and `sqrt(-det g)`.
    pub fn new(g_lower: Matrix4<f64>) -> Result<Self, MetricError> {
        let asym = relative_asymmetry_4(&g_lower);
        if asym > VALIDATION_TOL {
            return Err(MetricError::NotSymmetric(asym));
        }
        let g_lower = symmetric_part_4(&g_lower);

        let eigen = nalgebra::linalg::SymmetricEigen::new(g_lower);
        let scale = eigen.eigenvalues.amax();
        let tol = VALIDATION_TOL * scale.max(f64::MIN_POSITIVE);
        let mut plus = 0;
        let mut zero = 0;
        let mut minus = 0;
        for &lambda in eigen.eigenvalues.iter() {
            if lambda > tol {
                plus += 1;
            } else if lambda < -tol {
                minus += 1;
            } else {
                zero += 1;
            }
        }
        if zero > 0 {
            return Err(MetricError::Singular);
        }
        if plus != 1 || minus != 3 {
            return Err(MetricError::NotLorentzian { plus, zero, minus });
        }

        let det = g_lower.determinant();
        let g_upper = g_lower.try_inverse().ok_or(MetricError::Singular)?;
        Ok(Self {
            g_lower,
            g_upper: symmetric_part_4(&g_upper),
            det,
            sqrt_neg_det: (-det).sqrt(),
        })
    }

    /// The flat metric `diag(1, -1, -1, -1)`.
    pub fn minkowski() -> Self {
        let g = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        Self {
            g_lower: g,
            g_upper: g,
            det: -1.0,
            sqrt_neg_det: 1.0,
        }
    }

    pub fn g_lower(&self) -> &Matrix4<f64> {
        &self.g_lower
    }

    pub fn g_upper(&self) -> &Matrix4<f64> {
        &self.g_upper
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn sqrt_neg_det(&self) -> f64 {
        self.sqrt_neg_det
    }

    /// Volume tensor with all indices down, `eta_{abcd} = sqrt(-det g) [abcd]`.
    pub fn eta_lower(&self, indices: [usize; 4]) -> f64 {
        self.sqrt_neg_det * perm_sign_4(indices)
    }

    /// Volume tensor with all indices up, `eta^{abcd} = -[abcd] / sqrt(-det g)`.
    pub fn eta_upper(&self, indices: [usize; 4]) -> f64 {
        -perm_sign_4(indices) / self.sqrt_neg_det
    }
}

/// Target metric at a point: components, inverse and determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMetricSample {
    h_lower: Matrix2<f64>,
    h_upper: Matrix2<f64>,
    det: f64,
}

impl TargetMetricSample {
    pub fn new(h_lower: Matrix2<f64>) -> Result<Self, MetricError> {
        let scale = h_lower.amax().max(1.0);
        let asym = (h_lower[(0, 1)] - h_lower[(1, 0)]).abs() / scale;
        if asym > VALIDATION_TOL {
            return Err(MetricError::NotSymmetric(asym));
        }
        let off = 0.5 * (h_lower[(0, 1)] + h_lower[(1, 0)]);
        let h_lower = Matrix2::new(h_lower[(0, 0)], off, off, h_lower[(1, 1)]);
        let det = h_lower[(0, 0)] * h_lower[(1, 1)] - off * off;
        if h_lower[(0, 0)] <= 0.0 || det <= 0.0 {
            return Err(MetricError::NotPositiveDefinite);
        }
        let h_upper = Matrix2::new(
            h_lower[(1, 1)] / det,
            -off / det,
            -off / det,
            h_lower[(0, 0)] / det,
        );
        Ok(Self {
            h_lower,
            h_upper,
            det,
        })
    }

    /// The flat target metric `diag(1, 1)`.
    pub fn euclidean() -> Self {
        Self {
            h_lower: Matrix2::identity(),
            h_upper: Matrix2::identity(),
            det: 1.0,
        }
    }

    pub fn h_lower(&self) -> &Matrix2<f64> {
        &self.h_lower
    }

    pub fn h_upper(&self) -> &Matrix2<f64> {
        &self.h_upper
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn sqrt_det(&self) -> f64 {
        self.det.sqrt()
    }

    /// Area two-form `eps_AB = sqrt(det h) [AB]`.
    pub fn area_form(&self) -> Matrix2<f64> {
        let s = self.sqrt_det();
        Matrix2::new(0.0, s, -s, 0.0)
    }

    /// Raised area form `eps^{AB} = h^{AC} h^{BD} eps_CD = [AB] / sqrt(det h)`.
    pub fn area_form_upper(&self) -> Matrix2<f64> {
        let s = self.sqrt_det();
        Matrix2::new(0.0, 1.0 / s, -1.0 / s, 0.0)
    }
}

/// Exactly symmetric copy built from the upper triangle average.
pub(crate) fn symmetric_part_4(m: &Matrix4<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    for i in 0..4 {
        out[(i, i)] = m[(i, i)];
        for j in (i + 1)..4 {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

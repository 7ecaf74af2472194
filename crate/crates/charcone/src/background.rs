//! Catalog of analytic background maps and target geometries with
//! closed-form first and second derivatives, finite-difference self-checks,
//! and the cone-form field they induce for ray tracing.

use nalgebra::{Matrix2, Matrix2x4, Matrix4, Vector2, Vector4};
use thiserror::Error;

use crate::geometry::flux::flux_derivatives;
use crate::geometry::jet::JetSample;
use crate::geometry::metric::{symmetric_part_4, MetricError, MetricSample, TargetMetricSample};
use crate::geometry::strain::{pullback_metric, strain_and_invariants};
use crate::geometry::two_form::pullback_two_form;
use crate::model::LagrangianModel;
use crate::rays::{fd_form_gradient, Branch, FormField};

#[derive(Debug, Error, PartialEq)]
pub enum BackgroundError {
    #[error("map value ({u}, {v}) left the target chart domain")]
    ChartDomain { u: f64, v: f64 },
    #[error("target geometry parameter must be positive, got {0}")]
    InvalidGeometry(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Analytic background map families. Every family evaluates value, Jacobian
/// and Hessian in closed form at any base point.
#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    /// `phi(x) = y0`.
    ConstantMap { y0: Vector2<f64> },
    /// `phi(x) = y0 + C x`.
    LinearMap { c: Matrix2x4<f64>, y0: Vector2<f64> },
    /// `phi = (a sin(kappa.x), b cos(kappa.x))`; rank-one Jacobian, so the
    /// pullback two-form vanishes identically.
    PlaneWave {
        a: f64,
        b: f64,
        kappa: Vector4<f64>,
    },
    /// `phi = (a sin(kappa.x), b sin(mu.x))` with independent covectors; a
    /// generic fixture with nonzero `sigma_2` on a dense set.
    ProductWave {
        a: f64,
        b: f64,
        kappa: Vector4<f64>,
        mu: Vector4<f64>,
    },
}

impl Background {
    /// Map value at a base point.
    pub fn value(&self, x: &Vector4<f64>) -> Vector2<f64> {
        match self {
            Background::ConstantMap { y0 } => *y0,
            Background::LinearMap { c, y0 } => y0 + c * x,
            Background::PlaneWave { a, b, kappa } => {
                let phase = kappa.dot(x);
                Vector2::new(a * phase.sin(), b * phase.cos())
            }
            Background::ProductWave { a, b, kappa, mu } => {
                Vector2::new(a * kappa.dot(x).sin(), b * mu.dot(x).sin())
            }
        }
    }

    fn raw_jet(&self, x: &Vector4<f64>) -> (Vector2<f64>, Matrix2x4<f64>, [Matrix4<f64>; 2]) {
        match self {
            Background::ConstantMap { y0 } => {
                (*y0, Matrix2x4::zeros(), [Matrix4::zeros(), Matrix4::zeros()])
            }
            Background::LinearMap { c, y0 } => {
                (y0 + c * x, *c, [Matrix4::zeros(), Matrix4::zeros()])
            }
            Background::PlaneWave { a, b, kappa } => {
                let phase = kappa.dot(x);
                let (sin, cos) = phase.sin_cos();
                let mut jac = Matrix2x4::zeros();
                for col in 0..4 {
                    jac[(0, col)] = a * kappa[col] * cos;
                    jac[(1, col)] = -b * kappa[col] * sin;
                }
                let outer = kappa * kappa.transpose();
                (
                    Vector2::new(a * sin, b * cos),
                    jac,
                    [outer * (-a * sin), outer * (-b * cos)],
                )
            }
            Background::ProductWave { a, b, kappa, mu } => {
                let (sin_k, cos_k) = kappa.dot(x).sin_cos();
                let (sin_m, cos_m) = mu.dot(x).sin_cos();
                let mut jac = Matrix2x4::zeros();
                for col in 0..4 {
                    jac[(0, col)] = a * kappa[col] * cos_k;
                    jac[(1, col)] = b * mu[col] * cos_m;
                }
                (
                    Vector2::new(a * sin_k, b * sin_m),
                    jac,
                    [
                        kappa * kappa.transpose() * (-a * sin_k),
                        mu * mu.transpose() * (-b * sin_m),
                    ],
                )
            }
        }
    }

    /// True when the jet (and hence every derived tensor on a chart-constant
    /// target) does not vary with the base point.
    pub fn is_uniform(&self) -> bool {
        matches!(
            self,
            Background::ConstantMap { .. } | Background::LinearMap { .. }
        )
    }
}

/// Target geometries with closed-form metric and chart derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetGeometry {
    /// `h = diag(1, 1)` on all of the plane.
    Flat,
    /// Round-sphere metric in a stereographic chart,
    /// `h_AB = 4 delta_AB / (1 + u^2 + v^2)^2`.
    SphereStereographic,
    /// Hyperbolic-plane metric on the unit disk,
    /// `h_AB = 4 delta_AB / (1 - u^2 - v^2)^2`.
    PoincareDisk,
    /// `h = diag(c, 1/c)`, unit determinant.
    CustomDiagonal { c: f64 },
}

impl TargetGeometry {
    /// True when the map value lies inside the chart domain.
    pub fn contains(&self, y: &Vector2<f64>) -> bool {
        match self {
            TargetGeometry::PoincareDisk => y.norm_squared() < 1.0,
            _ => true,
        }
    }

    /// Metric sample at a target point.
    pub fn metric(&self, y: &Vector2<f64>) -> Result<TargetMetricSample, BackgroundError> {
        match self {
            TargetGeometry::Flat => Ok(TargetMetricSample::euclidean()),
            TargetGeometry::SphereStereographic => {
                let w = 1.0 + y.norm_squared();
                Ok(TargetMetricSample::new(Matrix2::identity() * (4.0 / (w * w)))?)
            }
            TargetGeometry::PoincareDisk => {
                if !self.contains(y) {
                    return Err(BackgroundError::ChartDomain { u: y[0], v: y[1] });
                }
                let w = 1.0 - y.norm_squared();
                Ok(TargetMetricSample::new(Matrix2::identity() * (4.0 / (w * w)))?)
            }
            TargetGeometry::CustomDiagonal { c } => {
                if *c <= 0.0 {
                    return Err(BackgroundError::InvalidGeometry(*c));
                }
                Ok(TargetMetricSample::new(Matrix2::new(*c, 0.0, 0.0, 1.0 / c))?)
            }
        }
    }

    /// Chart derivative of the metric, one matrix `d h_AB / d y^C` per
    /// target direction.
    pub fn metric_derivative(
        &self,
        y: &Vector2<f64>,
    ) -> Result<[Matrix2<f64>; 2], BackgroundError> {
        match self {
            TargetGeometry::Flat | TargetGeometry::CustomDiagonal { .. } => {
                Ok([Matrix2::zeros(), Matrix2::zeros()])
            }
            TargetGeometry::SphereStereographic => {
                let w = 1.0 + y.norm_squared();
                let factor = -16.0 / (w * w * w);
                Ok([
                    Matrix2::identity() * (factor * y[0]),
                    Matrix2::identity() * (factor * y[1]),
                ])
            }
            TargetGeometry::PoincareDisk => {
                if !self.contains(y) {
                    return Err(BackgroundError::ChartDomain { u: y[0], v: y[1] });
                }
                let w = 1.0 - y.norm_squared();
                let factor = 16.0 / (w * w * w);
                Ok([
                    Matrix2::identity() * (factor * y[0]),
                    Matrix2::identity() * (factor * y[1]),
                ])
            }
        }
    }

    /// True when the metric does not vary over the chart.
    pub fn is_uniform(&self) -> bool {
        matches!(
            self,
            TargetGeometry::Flat | TargetGeometry::CustomDiagonal { .. }
        )
    }
}

/// Closed-form second-order jet of a background at a base point, checked
/// against the target chart domain.
pub fn jet_eval(
    bg: &Background,
    geom: &TargetGeometry,
    x: &Vector4<f64>,
) -> Result<JetSample, BackgroundError> {
    let (phi, jac, hess) = bg.raw_jet(x);
    if !geom.contains(&phi) {
        return Err(BackgroundError::ChartDomain { u: phi[0], v: phi[1] });
    }
    Ok(JetSample::with_hessian(*x, phi, jac, hess)
        .expect("catalog hessians are symmetric by construction"))
}

/// Central finite differences of the catalog derivatives: the map value
/// against the Jacobian, the Jacobian against the Hessian, and the target
/// metric against its chart derivative. Returns the largest relative
/// deviation.
///
/// The value-level step is wider than the cube-root-of-epsilon rule used
/// for the derivative levels: the round-off floor `eps / h` must stay below
/// the exactness bound for linear maps while `h^2` truncation stays below
/// the smooth-map bound.
pub fn fd_check(
    bg: &Background,
    geom: &TargetGeometry,
    x: &Vector4<f64>,
) -> Result<f64, BackgroundError> {
    let jet = jet_eval(bg, geom, x)?;
    let hess = jet.hessian().expect("jet_eval always attaches a hessian");
    let value_step = 5e-4;
    let deriv_step = f64::EPSILON.cbrt();
    let mut worst = 0.0f64;

    for a in 0..4 {
        let step = value_step * (1.0 + x[a].abs());
        let mut xp = *x;
        let mut xm = *x;
        xp[a] += step;
        xm[a] -= step;
        let two_h = xp[a] - xm[a];

        let vp = bg.value(&xp);
        let vm = bg.value(&xm);
        for big_a in 0..2 {
            let fd = (vp[big_a] - vm[big_a]) / two_h;
            let dev = (fd - jet.jac[(big_a, a)]).abs() / (1.0 + jet.jac[(big_a, a)].abs());
            worst = worst.max(dev);
        }

        let step = deriv_step * (1.0 + x[a].abs());
        let mut xp = *x;
        let mut xm = *x;
        xp[a] += step;
        xm[a] -= step;
        let two_h = xp[a] - xm[a];
        let (_, jp, _) = bg.raw_jet(&xp);
        let (_, jm, _) = bg.raw_jet(&xm);
        for big_a in 0..2 {
            for b in 0..4 {
                let fd = (jp[(big_a, b)] - jm[(big_a, b)]) / two_h;
                let exact = hess[big_a][(b, a)];
                worst = worst.max((fd - exact).abs() / (1.0 + exact.abs()));
            }
        }
    }

    let dh = geom.metric_derivative(&jet.phi)?;
    for big_c in 0..2 {
        let step = deriv_step * (1.0 + jet.phi[big_c].abs());
        let mut yp = jet.phi;
        let mut ym = jet.phi;
        yp[big_c] += step;
        ym[big_c] -= step;
        let hp = geom.metric(&yp)?;
        let hm = geom.metric(&ym)?;
        let fd = (hp.h_lower() - hm.h_lower()) / (2.0 * step);
        let exact = &dh[big_c];
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((fd[(i, j)] - exact[(i, j)]).abs() / (1.0 + exact[(i, j)].abs()));
            }
        }
    }

    Ok(worst)
}

/// Cone-form field induced by a background, a target geometry, a base
/// metric and a Lagrangian model; drives ray integration.
///
/// The first branch gets analytic gradients through the second jet; the
/// second branch falls back to finite differences because its nonlinearity
/// parameter varies with `sigma_2` along the ray.
#[derive(Debug, Clone)]
pub struct BackgroundField<'a> {
    pub background: &'a Background,
    pub geometry: &'a TargetGeometry,
    pub base: &'a MetricSample,
    pub model: &'a LagrangianModel,
    pub branch: Branch,
}

impl BackgroundField<'_> {
    fn ingredients(
        &self,
        x: &Vector4<f64>,
    ) -> Option<(JetSample, TargetMetricSample, f64)> {
        let jet = jet_eval(self.background, self.geometry, x).ok()?;
        let h = self.geometry.metric(&jet.phi).ok()?;
        let sigma2 = strain_and_invariants(&pullback_metric(&jet, &h), self.base).sigma2();
        Some((jet, h, sigma2))
    }
}

impl FormField for BackgroundField<'_> {
    fn form(&self, x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        let (jet, h, sigma2) = self.ingredients(x)?;
        let form = pullback_two_form(&jet, &h, self.base);
        let hsq_up = form.hsq_upper();
        let g_up = self.base.g_upper();
        match self.branch {
            Branch::One => Some(symmetric_part_4(&(g_up * sigma2 + hsq_up))),
            Branch::Two => {
                let xi = self.model.eval(sigma2).ok()?.xi;
                Some(symmetric_part_4(&(g_up - hsq_up * xi)))
            }
        }
    }

    fn form_gradient(&self, x: &Vector4<f64>) -> Option<[Matrix4<f64>; 4]> {
        if self.is_constant() {
            return Some([Matrix4::zeros(); 4]);
        }
        match self.branch {
            Branch::One => {
                let (jet, h, _) = self.ingredients(x)?;
                let dh = self.geometry.metric_derivative(&jet.phi).ok()?;
                let flux = flux_derivatives(&jet, self.base, &h, Some(&dh)).ok()?;
                let form = pullback_two_form(&jet, &h, self.base);
                let g_lower = self.base.g_lower();
                let g_up = self.base.g_upper();
                let mut out = [Matrix4::zeros(); 4];
                for (a, slot) in out.iter_mut().enumerate() {
                    let d_hsq = flux.d_h_upper[a] * g_lower * form.h_upper
                        + form.h_upper * g_lower * flux.d_h_upper[a];
                    *slot = symmetric_part_4(&(g_up * flux.d_sigma2[a] + d_hsq));
                }
                Some(out)
            }
            Branch::Two => fd_form_gradient(self, x),
        }
    }

    fn is_constant(&self) -> bool {
        self.background.is_uniform()
            && (self.geometry.is_uniform()
                || matches!(self.background, Background::ConstantMap { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_linear_jets() {
        let geom = TargetGeometry::Flat;
        let y0 = Vector2::new(0.3, -0.2);
        let constant = Background::ConstantMap { y0 };
        let jet = jet_eval(&constant, &geom, &Vector4::new(1.0, 2.0, 3.0, 4.0)).unwrap();
        assert_eq!(jet.phi, y0);
        assert_eq!(jet.jac, Matrix2x4::zeros());
        assert_eq!(jet.hessian().unwrap()[0], Matrix4::zeros());

        let c = Matrix2x4::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0);
        let linear = Background::LinearMap { c, y0 };
        for x in [Vector4::zeros(), Vector4::new(-1.0, 0.5, 2.0, 0.3)] {
            let jet = jet_eval(&linear, &geom, &x).unwrap();
            assert_eq!(jet.jac, c);
            assert_eq!(jet.phi, y0 + c * x);
        }
    }

    #[test]
    fn plane_wave_jacobian_has_rank_one() {
        let kappa = Vector4::new(0.4, 1.0, -0.3, 0.2);
        let bg = Background::PlaneWave {
            a: 1.1,
            b: 0.7,
            kappa,
        };
        let jet = jet_eval(&bg, &TargetGeometry::Flat, &Vector4::new(0.3, 0.1, 0.0, -0.4)).unwrap();
        // Both rows proportional to kappa: all 2x2 minors vanish.
        for a in 0..4 {
            for b in 0..4 {
                let minor = jet.jac[(0, a)] * jet.jac[(1, b)] - jet.jac[(0, b)] * jet.jac[(1, a)];
                assert!(minor.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn poincare_disk_rejects_exterior_points() {
        let geom = TargetGeometry::PoincareDisk;
        let bg = Background::ConstantMap {
            y0: Vector2::new(0.9, 0.9),
        };
        assert!(matches!(
            jet_eval(&bg, &geom, &Vector4::zeros()),
            Err(BackgroundError::ChartDomain { .. })
        ));
        assert!(geom.metric(&Vector2::new(0.3, 0.2)).is_ok());
    }

    #[test]
    fn linear_map_fd_check_is_exact_to_roundoff() {
        let bg = Background::LinearMap {
            c: Matrix2x4::new(0.3, 1.2, -0.4, 0.5, -0.7, 0.2, 0.9, -0.1),
            y0: Vector2::new(0.1, 0.2),
        };
        let dev = fd_check(&bg, &TargetGeometry::Flat, &Vector4::new(0.4, -0.2, 0.9, 0.3)).unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn product_wave_fd_check_at_origin() {
        let bg = Background::ProductWave {
            a: 1.0,
            b: 1.0,
            kappa: Vector4::new(0.0, 1.0, 0.0, 0.0),
            mu: Vector4::new(0.0, 0.0, 1.0, 0.0),
        };
        let dev = fd_check(&bg, &TargetGeometry::Flat, &Vector4::zeros()).unwrap();
        assert!(dev <= 1e-7, "deviation {dev}");
    }

    #[test]
    fn sphere_metric_derivative_fd_check() {
        let bg = Background::ConstantMap {
            y0: Vector2::new(0.4, -0.6),
        };
        let dev = fd_check(&bg, &TargetGeometry::SphereStereographic, &Vector4::zeros()).unwrap();
        assert!(dev <= 1e-7, "deviation {dev}");
    }

    #[test]
    fn product_wave_sigma2_is_generically_nonzero() {
        let bg = Background::ProductWave {
            a: 1.0,
            b: 1.0,
            kappa: Vector4::new(0.0, 1.0, 0.0, 0.0),
            mu: Vector4::new(0.0, 0.0, 1.0, 0.0),
        };
        let g = MetricSample::minkowski();
        let h = TargetMetricSample::euclidean();
        let jet = jet_eval(&bg, &TargetGeometry::Flat, &Vector4::new(0.0, 0.3, 0.4, 0.0)).unwrap();
        let sigma2 = strain_and_invariants(&pullback_metric(&jet, &h), &g).sigma2();
        assert!(sigma2.abs() > 1e-3);
    }
}

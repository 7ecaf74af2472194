//! Pulled-back metric, strain and elementary symmetric invariants.

use nalgebra::Matrix4;

use super::jet::JetSample;
use super::metric::{MetricSample, TargetMetricSample};

/// Strain data of a jet: the pulled-back metric, its mixed form and the
/// elementary symmetric invariants `sigma_1..sigma_4`.
///
/// For a two-dimensional target the strain has rank at most two, so
/// `sigma_3` and `sigma_4` vanish to round-off; they are kept as rank
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainData {
    pub l_lower: Matrix4<f64>,
    pub l_mixed: Matrix4<f64>,
    pub sigma: [f64; 4],
}

impl StrainData {
    pub fn sigma1(&self) -> f64 {
        self.sigma[0]
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma[1]
    }
}

/// Pulled-back target metric `L_ab = h_AB jac^A_a jac^B_b`.
///
/// Total on all jets; the zero Jacobian gives the zero form. The result is
/// exactly symmetric.
pub fn pullback_metric(jet: &JetSample, h: &TargetMetricSample) -> Matrix4<f64> {
    let hl = h.h_lower();
    let j = &jet.jac;
    let mut out = Matrix4::zeros();
    for a in 0..4 {
        for b in a..4 {
            let mut v = 0.0;
            for big_a in 0..2 {
                for big_b in 0..2 {
                    v += hl[(big_a, big_b)] * j[(big_a, a)] * j[(big_b, b)];
                }
            }
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
    }
    out
}

/// Raises one index with the base metric and evaluates the invariants via
/// the trace formulas; `sigma_4` is the plain 4x4 determinant.
pub fn strain_and_invariants(l_lower: &Matrix4<f64>, g: &MetricSample) -> StrainData {
    let l_mixed = g.g_upper() * l_lower;
    let l2 = l_mixed * l_mixed;
    let l3 = l2 * l_mixed;
    let t1 = l_mixed.trace();
    let t2 = l2.trace();
    let t3 = l3.trace();
    let sigma1 = t1;
    let sigma2 = 0.5 * (t1 * t1 - t2);
    let sigma3 = (t1 * t1 * t1 - 3.0 * t1 * t2 + 2.0 * t3) / 6.0;
    let sigma4 = l_mixed.determinant();
    StrainData {
        l_lower: *l_lower,
        l_mixed,
        sigma: [sigma1, sigma2, sigma3, sigma4],
    }
}

/// Normalized residual of `L^4 - sigma_1 L^3 + sigma_2 L^2`.
///
/// The rank bound of a two-dimensional target truncates the characteristic
/// polynomial, so this vanishes to round-off for every pullback strain.
pub fn cayley_hamilton_residual(strain: &StrainData) -> f64 {
    let l = &strain.l_mixed;
    let l2 = l * l;
    let l3 = l2 * l;
    let l4 = l3 * l;
    let residual = l4 - l3 * strain.sigma[0] + l2 * strain.sigma[1];
    residual.amax() / (1.0 + l.amax()).powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::test_fixtures::w1_jet;
    use nalgebra::{Matrix2x4, Vector2, Vector4};

    #[test]
    fn constant_map_has_zero_strain() {
        let jet = JetSample::first_order(
            Vector4::zeros(),
            Vector2::new(0.3, -0.7),
            Matrix2x4::zeros(),
        );
        let h = TargetMetricSample::euclidean();
        let g = MetricSample::minkowski();
        let l = pullback_metric(&jet, &h);
        assert_eq!(l, Matrix4::zeros());
        let strain = strain_and_invariants(&l, &g);
        assert_eq!(strain.sigma, [0.0; 4]);
        assert_eq!(cayley_hamilton_residual(&strain), 0.0);
    }

    #[test]
    fn planar_identity_map_invariants() {
        let (jet, h, g) = w1_jet();
        let l = pullback_metric(&jet, &h);
        let mut expected = Matrix4::zeros();
        expected[(1, 1)] = 1.0;
        expected[(2, 2)] = 1.0;
        assert_eq!(l, expected);

        let strain = strain_and_invariants(&l, &g);
        let mut mixed = Matrix4::zeros();
        mixed[(1, 1)] = -1.0;
        mixed[(2, 2)] = -1.0;
        assert_eq!(strain.l_mixed, mixed);
        assert_eq!(strain.sigma[0], -2.0);
        assert_eq!(strain.sigma[1], 1.0);
        assert_eq!(strain.sigma[2], 0.0);
        assert_eq!(strain.sigma[3], 0.0);
        assert_eq!(cayley_hamilton_residual(&strain), 0.0);
    }
}

//! Principal part and principal symbol of the quasilinear evolution system,
//! the two quadratic cone forms, the quartic characteristic tensor, the
//! determinant identities behind the cone factorization, and the pointwise
//! hyperbolicity verdict.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use thiserror::Error;

use crate::geometry::flux::{flux_derivatives, FluxError};
use crate::geometry::jet::JetSample;
use crate::geometry::metric::{symmetric_part_4, MetricSample, TargetMetricSample};
use crate::geometry::strain::{pullback_metric, strain_and_invariants};
use crate::geometry::two_form::{pullback_two_form, PullbackForm};
use crate::model::{LagrangianModel, ModelError};

/// Default relative threshold below which an eigenvalue counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum EomError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("second derivatives required: jet carries no hessian")]
    MissingHessian,
}

impl From<FluxError> for EomError {
    fn from(_: FluxError) -> Self {
        EomError::MissingHessian
    }
}

/// Coefficient tensor of the second-derivative terms, `M^{ab}_{AB}`,
/// symmetric in `(a, b)` and `(A, B)` by construction, plus the auxiliary
/// tensor `N_AB`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalPart {
    m: [[Matrix2<f64>; 4]; 4],
    n: Matrix2<f64>,
}

impl PrincipalPart {
    pub fn component(&self, a: usize, b: usize, big_a: usize, big_b: usize) -> f64 {
        self.m[a][b][(big_a, big_b)]
    }

    pub fn n(&self) -> &Matrix2<f64> {
        &self.n
    }

    /// Principal symbol by contraction, `M_AB(k) = M^{ab}_{AB} k_a k_b`.
    pub fn contract(&self, k: &Vector4<f64>) -> Matrix2<f64> {
        let mut out = Matrix2::zeros();
        for a in 0..4 {
            for b in 0..4 {
                out += self.m[a][b] * (k[a] * k[b]);
            }
        }
        out
    }
}

/// Auxiliary tensor `N_AB = eps_AP eps_BQ jac^P_c g^{cd} jac^Q_d`.
fn n_tensor(jet: &JetSample, g: &MetricSample, h: &TargetMetricSample) -> Matrix2<f64> {
    let eps = h.area_form();
    let m_up = jet.jac * g.g_upper() * jet.jac.transpose();
    let mut n = Matrix2::zeros();
    for big_a in 0..2 {
        for big_b in big_a..2 {
            let mut v = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    v += eps[(big_a, p)] * eps[(big_b, q)] * m_up[(p, q)];
                }
            }
            n[(big_a, big_b)] = v;
            n[(big_b, big_a)] = v;
        }
    }
    n
}

/// Principal part of the evolution system at a jet,
/// `M^{ab}_{AB} = (eps_AP eps_BQ - xi N_AP N_BQ) g^{ac} g^{bd}
/// jac^{(P}_c jac^{Q)}_d - g^{ab} N_AB`.
pub fn principal_part(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
) -> PrincipalPart {
    let eps = h.area_form();
    let n = n_tensor(jet, g, h);
    let g_up = g.g_upper();
    // w[(a, P)] = g^{ab} jac^P_b.
    let w = g_up * jet.jac.transpose();

    let mut m = [[Matrix2::zeros(); 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let mut block = Matrix2::zeros();
            for big_a in 0..2 {
                for big_b in big_a..2 {
                    let mut v = 0.0;
                    for p in 0..2 {
                        for q in 0..2 {
                            let coeff = eps[(big_a, p)] * eps[(big_b, q)]
                                - xi * n[(big_a, p)] * n[(big_b, q)];
                            let sym = 0.5 * (w[(a, p)] * w[(b, q)] + w[(a, q)] * w[(b, p)]);
                            v += coeff * sym;
                        }
                    }
                    v -= g_up[(a, b)] * n[(big_a, big_b)];
                    block[(big_a, big_b)] = v;
                    block[(big_b, big_a)] = v;
                }
            }
            m[a][b] = block;
            m[b][a] = block;
        }
    }
    PrincipalPart { m, n }
}

/// Principal symbol in closed form,
/// `M_AB(k) = |l|^2_h h_AB - |k|^2_g N_AB - l_A l_B - xi (N l)_A (N l)_B`
/// with `l^P = g^{ab} jac^P_b k_a`.
///
/// Must agree with [`PrincipalPart::contract`]; the two code paths are kept
/// independent on purpose.
pub fn symbol(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
    k: &Vector4<f64>,
) -> Matrix2<f64> {
    let gk = g.g_upper() * k;
    let ell_up: Vector2<f64> = jet.jac * gk;
    let ell_dn = h.h_lower() * ell_up;
    let ell_sq = ell_up.dot(&ell_dn);
    let k_sq = k.dot(&gk);
    let n = n_tensor(jet, g, h);
    let nl = n * ell_up;
    let hl = h.h_lower();
    let mut out = Matrix2::zeros();
    for big_a in 0..2 {
        for big_b in big_a..2 {
            let v = ell_sq * hl[(big_a, big_b)] - k_sq * n[(big_a, big_b)]
                - ell_dn[big_a] * ell_dn[big_b]
                - xi * nl[big_a] * nl[big_b];
            out[(big_a, big_b)] = v;
            out[(big_b, big_a)] = v;
        }
    }
    out
}

/// Characteristic polynomial `P(k) = det M_AB(k)`, quartic and homogeneous
/// in the covector.
pub fn char_poly(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
    k: &Vector4<f64>,
) -> f64 {
    let m = symbol(jet, g, h, xi, k);
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Sylvester inertia of a symmetric form: counts of positive, zero and
/// negative eigenvalues at a relative rank tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Inertia {
    /// True for signature `(1, 0, 3)` or `(3, 0, 1)`.
    pub fn is_lorentzian(&self) -> bool {
        self.zero == 0 && ((self.plus == 1 && self.minus == 3) || (self.plus == 3 && self.minus == 1))
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.plus, self.zero, self.minus]
    }
}

/// A symmetric contravariant quadratic form with its determinant and
/// inertia.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub matrix: Matrix4<f64>,
    pub det: f64,
    pub inertia: Inertia,
    /// Effective zero threshold used for the inertia classification.
    pub zero_tol: f64,
}

impl QuadraticForm {
    /// Classifies eigenvalues against `max(rank_tol * |lambda|_max,
    /// noise_floor)`.
    ///
    /// The noise floor is an absolute bound at the round-off level of
    /// whatever assembled the form. Without it a form that is pure
    /// cancellation noise (a plane-wave point, say, where `sigma_2` cancels
    /// to 1e-16) parades its noise eigenvalues as a clean signature.
    pub fn from_matrix(matrix: Matrix4<f64>, rank_tol: f64, noise_floor: f64) -> Self {
        let eigen = nalgebra::linalg::SymmetricEigen::new(matrix);
        let tol = (rank_tol * eigen.eigenvalues.amax()).max(noise_floor);
        let mut inertia = Inertia {
            plus: 0,
            zero: 0,
            minus: 0,
        };
        for &lambda in eigen.eigenvalues.iter() {
            if lambda > tol {
                inertia.plus += 1;
            } else if lambda < -tol {
                inertia.minus += 1;
            } else {
                inertia.zero += 1;
            }
        }
        Self {
            matrix,
            det: matrix.determinant(),
            inertia,
            zero_tol: tol,
        }
    }

    /// Value of the form on a covector.
    pub fn value(&self, k: &Vector4<f64>) -> f64 {
        k.dot(&(self.matrix * k))
    }

    /// Orthonormal basis of the numerical kernel at the classification
    /// threshold, ordered lexicographically with a fixed sign convention for
    /// reproducible output.
    pub fn kernel_basis(&self) -> Vec<Vector4<f64>> {
        let eigen = nalgebra::linalg::SymmetricEigen::new(self.matrix);
        let mut basis: Vec<Vector4<f64>> = Vec::new();
        for (i, &lambda) in eigen.eigenvalues.iter().enumerate() {
            if lambda.abs() <= self.zero_tol {
                let mut v: Vector4<f64> = eigen.eigenvectors.column(i).into_owned();
                if let Some(lead) = v.iter().find(|c| c.abs() > 1e-12) {
                    if *lead < 0.0 {
                        v = -v;
                    }
                }
                basis.push(v);
            }
        }
        basis.sort_by(|a, b| {
            for i in 0..4 {
                match b[i].total_cmp(&a[i]) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        });
        basis
    }
}

fn quadratic_form_matrices(
    sigma2: f64,
    form: &PullbackForm,
    g: &MetricSample,
    xi: f64,
) -> (Matrix4<f64>, Matrix4<f64>) {
    let hsq_up = form.hsq_upper();
    let g_up = g.g_upper();
    let g1 = symmetric_part_4(&(g_up * sigma2 + hsq_up));
    let g2 = symmetric_part_4(&(g_up - hsq_up * xi));
    (g1, g2)
}

/// Round-off floors of the two cone forms, derived from the
/// pre-cancellation magnitude of their assembly.
fn cone_noise_floors(
    strain: &crate::geometry::StrainData,
    form: &PullbackForm,
    g: &MetricSample,
    xi: f64,
) -> (f64, f64) {
    let g_scale = g.g_upper().amax();
    let hsq_scale = 4.0 * form.h_mixed.amax() * form.h_upper.amax();
    let sigma2_scale = (1.0 + strain.l_mixed.amax()).powi(2);
    let unit = 8.0 * f64::EPSILON;
    (
        unit * (g_scale * sigma2_scale + hsq_scale),
        unit * (g_scale + xi.abs() * hsq_scale),
    )
}

/// The two quadratic cone forms of the factorized characteristic polynomial,
/// `G1 = sigma_2 g^{ab} + H^a_c H^{cb}` and `G2 = g^{ab} - xi H^a_c H^{cb}`.
pub fn quadratic_forms(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
    rank_tol: f64,
) -> (QuadraticForm, QuadraticForm) {
    let strain = strain_and_invariants(&pullback_metric(jet, h), g);
    let form = pullback_two_form(jet, h, g);
    let (g1, g2) = quadratic_form_matrices(strain.sigma2(), &form, g, xi);
    let (floor1, floor2) = cone_noise_floors(&strain, &form, g, xi);
    (
        QuadraticForm::from_matrix(g1, rank_tol, floor1),
        QuadraticForm::from_matrix(g2, rank_tol, floor2),
    )
}

/// Normalized residual of the cone factorization
/// `P(k) = det(h) (G1 k k) (G2 k k)`.
pub fn factorization_residual(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
    k: &Vector4<f64>,
) -> f64 {
    let p = char_poly(jet, g, h, xi, k);
    let strain = strain_and_invariants(&pullback_metric(jet, h), g);
    let form = pullback_two_form(jet, h, g);
    let (g1, g2) = quadratic_form_matrices(strain.sigma2(), &form, g, xi);
    let p1 = k.dot(&(g1 * k));
    let p2 = k.dot(&(g2 * k));
    (p - h.det() * p1 * p2).abs() / (1.0 + p.abs())
}

/// Outcome of the closed-form determinant identity for
/// `det(delta + f H^a_c H^c_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantIdentity {
    /// Plain 4x4 determinant of `delta + f H^2`.
    pub lhs: f64,
    /// `U = 1 - (f/2) H_ab H^{ab} - (f^2/16) (H_ab (*H)^{ab})^2`.
    pub u: f64,
    /// `|lhs - U^2| / (1 + U^2)`.
    pub residual: f64,
}

/// Evaluates `det(delta + f H^2) = U^2` for an arbitrary antisymmetric form.
pub fn determinant_identity(form: &PullbackForm, f: f64) -> DeterminantIdentity {
    let lhs = (Matrix4::identity() + form.hsq_mixed * f).determinant();
    let u = 1.0 - 0.5 * f * form.hh - f * f / 16.0 * form.hdh * form.hdh;
    DeterminantIdentity {
        lhs,
        u,
        residual: (lhs - u * u).abs() / (1.0 + u * u),
    }
}

/// Totally symmetric quartic characteristic tensor, built as
/// `det(h) sym(G1 (x) G2)`; evaluating it on `(k, k, k, k)` reproduces the
/// characteristic polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticForm {
    g4: [[[[f64; 4]; 4]; 4]; 4],
}

impl QuarticForm {
    pub fn new(det_h: f64, g1: &Matrix4<f64>, g2: &Matrix4<f64>) -> Self {
        let mut g4 = [[[[0.0; 4]; 4]; 4]; 4];
        for (a, plane) in g4.iter_mut().enumerate() {
            for (b, row) in plane.iter_mut().enumerate() {
                for (c, line) in row.iter_mut().enumerate() {
                    for (d, slot) in line.iter_mut().enumerate() {
                        *slot = det_h / 6.0
                            * (g1[(a, b)] * g2[(c, d)]
                                + g1[(c, d)] * g2[(a, b)]
                                + g1[(a, c)] * g2[(b, d)]
                                + g1[(b, d)] * g2[(a, c)]
                                + g1[(a, d)] * g2[(b, c)]
                                + g1[(b, c)] * g2[(a, d)]);
                    }
                }
            }
        }
        Self { g4 }
    }

    pub fn component(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.g4[a][b][c][d]
    }

    pub fn eval(&self, k: &Vector4<f64>) -> f64 {
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        total += self.g4[a][b][c][d] * k[a] * k[b] * k[c] * k[d];
                    }
                }
            }
        }
        total
    }
}

/// Quartic characteristic tensor of a jet.
pub fn quartic_form(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
) -> QuarticForm {
    let strain = strain_and_invariants(&pullback_metric(jet, h), g);
    let form = pullback_two_form(jet, h, g);
    let (g1, g2) = quadratic_form_matrices(strain.sigma2(), &form, g, xi);
    QuarticForm::new(h.det(), &g1, &g2)
}

/// Pointwise hyperbolicity verdict: both cone forms with their determinants,
/// inertias, the kernel of the first form and the resulting flag.
#[derive(Debug, Clone, PartialEq)]
pub struct PointVerdict {
    pub sigma2: f64,
    pub xi: f64,
    pub det_g1: f64,
    pub det_g2: f64,
    pub inertia_g1: Inertia,
    pub inertia_g2: Inertia,
    pub kernel_g1: Vec<Vector4<f64>>,
    pub hyperbolic: bool,
    pub notes: Vec<String>,
}

/// Full degeneracy report at one jet.
///
/// The verdict is hyperbolic only when both cone forms carry Lorentzian
/// inertia; any rank deficiency disqualifies the point. The determinant of
/// the second form is cross-checked against the closed form
/// `det(g)^{-1} (1 + xi sigma_2)^2`, whose squared factor is pinned by the
/// determinant identity for `det(delta + f H^2)`.
pub fn degeneracy_report(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    xi: f64,
    rank_tol: f64,
) -> PointVerdict {
    let strain = strain_and_invariants(&pullback_metric(jet, h), g);
    let sigma2 = strain.sigma2();
    let form = pullback_two_form(jet, h, g);
    let (m1, m2) = quadratic_form_matrices(sigma2, &form, g, xi);
    let (floor1, floor2) = cone_noise_floors(&strain, &form, g, xi);
    let g1 = QuadraticForm::from_matrix(m1, rank_tol, floor1);
    let g2 = QuadraticForm::from_matrix(m2, rank_tol, floor2);

    let mut notes = Vec::new();
    let closed_det_g2 = (1.0 + xi * sigma2).powi(2) / g.det();
    let det_check = (g2.det - closed_det_g2).abs() / (1.0 + g2.det.abs());
    notes.push(format!(
        "det G2 vs det(g)^-1 (1 + xi sigma2)^2: residual {det_check:.3e}"
    ));
    if g1.inertia.zero > 0 {
        notes.push(format!(
            "G1 singular: kernel dimension {}",
            g1.inertia.zero
        ));
    }
    if !g2.inertia.is_lorentzian() {
        notes.push("G2 not Lorentzian".to_string());
    }

    let hyperbolic = g1.inertia.is_lorentzian() && g2.inertia.is_lorentzian();
    PointVerdict {
        sigma2,
        xi,
        det_g1: g1.det,
        det_g2: g2.det,
        inertia_g1: g1.inertia,
        inertia_g2: g2.inertia,
        kernel_g1: g1.kernel_basis(),
        hyperbolic,
        notes,
    }
}

/// Residual of the field equations
/// `d_a( sqrt(-det g) L' H^{ab} ) jac^A_b` at a second-order jet on
/// chart-constant base and target metrics; vanishes at exact solutions.
pub fn eom_residual(
    jet: &JetSample,
    g: &MetricSample,
    h: &TargetMetricSample,
    model: &LagrangianModel,
) -> Result<Vector2<f64>, EomError> {
    if jet.hessian().is_none() {
        return Err(EomError::MissingHessian);
    }
    let strain = strain_and_invariants(&pullback_metric(jet, h), g);
    let eval = model.eval(strain.sigma2())?;
    let form = pullback_two_form(jet, h, g);
    let flux = flux_derivatives(jet, g, h, None)?;

    let mut residual = Vector2::zeros();
    for big_a in 0..2 {
        let mut v = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let div = eval.l22 * flux.d_sigma2[a] * form.h_upper[(a, b)]
                    + eval.l2 * flux.d_h_upper[a][(a, b)];
                v += div * jet.jac[(big_a, b)];
            }
        }
        residual[big_a] = g.sqrt_neg_det() * v;
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::test_fixtures::w1_jet;
    use nalgebra::{Matrix2x4, Vector2, Vector4};

    #[test]
    fn constant_map_has_zero_principal_part() {
        let jet = JetSample::first_order(Vector4::zeros(), Vector2::zeros(), Matrix2x4::zeros());
        let g = MetricSample::minkowski();
        let h = TargetMetricSample::euclidean();
        let part = principal_part(&jet, &g, &h, 0.7);
        for a in 0..4 {
            for b in 0..4 {
                for ba in 0..2 {
                    for bb in 0..2 {
                        assert_eq!(part.component(a, b, ba, bb), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn planar_map_principal_part_time_block() {
        let (jet, h, g) = w1_jet();
        let part = principal_part(&jet, &g, &h, 0.0);
        // N_AB = -delta_AB and only the -g^{ab} N_AB term survives at a=b=0.
        assert_eq!(*part.n(), -Matrix2::identity());
        assert_eq!(part.component(0, 0, 0, 0), 1.0);
        assert_eq!(part.component(0, 0, 1, 1), 1.0);
        assert_eq!(part.component(0, 0, 0, 1), 0.0);
    }

    #[test]
    fn planar_map_symbol_closed_form() {
        let (jet, h, g) = w1_jet();
        let k = Vector4::new(0.4, -1.1, 0.8, 0.3);
        let k_sq = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
        let m = symbol(&jet, &g, &h, 0.0, &k);
        assert!((m[(0, 0)] - (k[2] * k[2] + k_sq)).abs() < 1e-15);
        assert!((m[(1, 1)] - (k[1] * k[1] + k_sq)).abs() < 1e-15);
        assert!((m[(0, 1)] + k[1] * k[2]).abs() < 1e-15);
        let p = char_poly(&jet, &g, &h, 0.0, &k);
        let expected = k_sq * (k[0] * k[0] - k[3] * k[3]);
        assert!((p - expected).abs() < 1e-14);
    }

    #[test]
    fn symbol_vanishes_at_zero_covector() {
        let (jet, h, g) = w1_jet();
        assert_eq!(
            symbol(&jet, &g, &h, -0.3, &Vector4::zeros()),
            Matrix2::zeros()
        );
        assert_eq!(char_poly(&jet, &g, &h, -0.3, &Vector4::zeros()), 0.0);
    }

    #[test]
    fn planar_map_cone_forms() {
        let (jet, h, g) = w1_jet();
        let xi = 0.4;
        let (g1, g2) = quadratic_forms(&jet, &g, &h, xi, DEFAULT_RANK_TOL);
        let mut expected1 = Matrix4::zeros();
        expected1[(0, 0)] = 1.0;
        expected1[(3, 3)] = -1.0;
        assert_eq!(g1.matrix, expected1);
        let expected2 = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0 - xi, -1.0 - xi, -1.0));
        assert_eq!(g2.matrix, expected2);
        assert_eq!(g1.inertia.as_array(), [1, 2, 1]);
        assert!(!g1.inertia.is_lorentzian());
        assert!(g2.inertia.is_lorentzian());
    }

    #[test]
    fn constant_map_cone_forms() {
        let jet = JetSample::first_order(Vector4::zeros(), Vector2::zeros(), Matrix2x4::zeros());
        let g = MetricSample::minkowski();
        let h = TargetMetricSample::euclidean();
        let (g1, g2) = quadratic_forms(&jet, &g, &h, 0.9, DEFAULT_RANK_TOL);
        assert_eq!(g1.matrix, Matrix4::zeros());
        assert_eq!(g2.matrix, *g.g_upper());
        assert_eq!(g1.inertia.as_array(), [0, 4, 0]);
    }

    #[test]
    fn planar_map_factorization_is_exact() {
        let (jet, h, g) = w1_jet();
        for (xi, k) in [
            (0.0, Vector4::new(1.0, 0.2, -0.4, 0.7)),
            (-0.25, Vector4::new(0.3, -1.0, 0.5, -0.2)),
            (1.5, Vector4::new(-0.8, 0.1, 0.9, 0.4)),
        ] {
            assert!(factorization_residual(&jet, &g, &h, xi, &k) < 1e-14);
        }
    }

    #[test]
    fn planar_map_determinant_identity() {
        let (jet, h, g) = w1_jet();
        let form = pullback_two_form(&jet, &h, &g);
        for f in [-2.0, -0.5, 0.0, 0.3, 1.7] {
            let out = determinant_identity(&form, f);
            assert!((out.lhs - (1.0 - f) * (1.0 - f)).abs() < 1e-13);
            assert!((out.u - (1.0 - f)).abs() < 1e-13);
            assert!(out.residual < 1e-13);
        }
    }

    #[test]
    fn zero_form_determinant_identity() {
        let g = MetricSample::minkowski();
        let form = PullbackForm::from_antisymmetric(Matrix4::zeros(), &g);
        let out = determinant_identity(&form, 0.8);
        assert_eq!(out.lhs, 1.0);
        assert_eq!(out.u, 1.0);
        assert_eq!(out.residual, 0.0);
    }

    #[test]
    fn planar_map_verdict() {
        let (jet, h, g) = w1_jet();
        let verdict = degeneracy_report(&jet, &g, &h, 0.0, DEFAULT_RANK_TOL);
        assert_eq!(verdict.sigma2, 1.0);
        assert_eq!(verdict.det_g1, 0.0);
        assert_eq!(verdict.inertia_g1.as_array(), [1, 2, 1]);
        assert!(!verdict.hyperbolic);
        // Kernel spanned by the two covector directions dual to x^1, x^2.
        assert_eq!(verdict.kernel_g1.len(), 2);
        for v in &verdict.kernel_g1 {
            assert!(v[0].abs() < 1e-12 && v[3].abs() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let spans_plane = (verdict.kernel_g1[0][1].abs() - 1.0).abs() < 1e-12
            && (verdict.kernel_g1[1][2].abs() - 1.0).abs() < 1e-12
            || (verdict.kernel_g1[0][2].abs() - 1.0).abs() < 1e-12
                && (verdict.kernel_g1[1][1].abs() - 1.0).abs() < 1e-12;
        assert!(spans_plane);
    }

    #[test]
    fn planar_map_verdict_with_three_quarter_model() {
        let (jet, h, g) = w1_jet();
        // sigma2 = 1 for this jet; xi = 2 (q - 1) / sigma2 = -1/2.
        let xi = LagrangianModel::three_quarter_power().eval(1.0).unwrap().xi;
        let verdict = degeneracy_report(&jet, &g, &h, xi, DEFAULT_RANK_TOL);
        assert_eq!(verdict.xi, -0.5);
        assert_eq!(verdict.inertia_g2.as_array(), [1, 0, 3]);
        assert!(!verdict.hyperbolic, "singular G1 disqualifies the point");
        let (_, g2) = quadratic_forms(&jet, &g, &h, xi, DEFAULT_RANK_TOL);
        let expected = Matrix4::from_diagonal(&Vector4::new(1.0, -0.5, -0.5, -1.0));
        assert!((g2.matrix - expected).amax() < 1e-15);
    }

    #[test]
    fn eom_residual_zero_for_constant_and_linear_maps() {
        let g = MetricSample::minkowski();
        let h = TargetMetricSample::euclidean();
        let model = LagrangianModel::strongly_coupled();

        let constant = JetSample::with_hessian(
            Vector4::zeros(),
            Vector2::new(0.4, -0.2),
            Matrix2x4::zeros(),
            [Matrix4::zeros(), Matrix4::zeros()],
        )
        .unwrap();
        // sigma2 = 0 for the constant map; the linear model stays regular.
        let r = eom_residual(&constant, &g, &h, &model).unwrap();
        assert_eq!(r, Vector2::zeros());

        let c = Matrix2x4::new(0.3, 1.2, -0.4, 0.5, -0.7, 0.2, 0.9, -0.1);
        let linear = JetSample::with_hessian(
            Vector4::new(0.3, 0.1, -0.2, 0.5),
            Vector2::new(1.0, 2.0),
            c,
            [Matrix4::zeros(), Matrix4::zeros()],
        )
        .unwrap();
        let r = eom_residual(&linear, &g, &h, &model).unwrap();
        assert_eq!(r, Vector2::zeros());
    }

    #[test]
    fn eom_residual_requires_hessian() {
        let g = MetricSample::minkowski();
        let h = TargetMetricSample::euclidean();
        let model = LagrangianModel::strongly_coupled();
        let jet = JetSample::first_order(Vector4::zeros(), Vector2::zeros(), Matrix2x4::zeros());
        assert_eq!(
            eom_residual(&jet, &g, &h, &model).unwrap_err(),
            EomError::MissingHessian
        );
    }
}

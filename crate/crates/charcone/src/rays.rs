//! Bicharacteristic rays of a quadratic cone branch.
//!
//! A branch Hamiltonian `P(x, k) = G^{ab}(x) k_a k_b` generates rays through
//! the canonical equations `dx^a/dl = 2 G^{ab} k_b` and
//! `dk_a/dl = -(d_a G^{bc}) k_b k_c`. The Hamiltonian itself is the affine
//! generator, so `P` is conserved along exact rays and its drift is the
//! integration diagnostic.

use nalgebra::{Matrix4, Vector4};
use thiserror::Error;

/// Which quadratic factor of the characteristic polynomial drives the ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `G1 = sigma_2 g^{ab} + H^a_c H^{cb}`.
    One,
    /// `G2 = g^{ab} - xi H^a_c H^{cb}`.
    Two,
}

impl Branch {
    pub fn index(&self) -> u8 {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }
}

/// Root choice when completing a covector onto the cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSelect {
    /// Larger `k_0` root.
    Future,
    /// Smaller `k_0` root.
    Past,
}

#[derive(Debug, Error, PartialEq)]
pub enum RayError {
    #[error("no real characteristic root in this direction (discriminant {discriminant:.3e})")]
    NoRealRoot { discriminant: f64 },
    #[error("cone form fully degenerate in this direction")]
    FullyDegenerate,
}

/// How the null completion found its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Simple quadratic root.
    Simple,
    /// Vanishing discriminant; the double root is returned with this note.
    Double,
    /// `G^{00}` vanished and the unique linear root was used.
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullProjection {
    pub k: Vector4<f64>,
    pub kind: RootKind,
}

/// Completes spatial covector components to a null covector of the form,
/// solving `G^{ab} k_a k_b = 0` for `k_0`.
pub fn null_project(
    form: &Matrix4<f64>,
    spatial: [f64; 3],
    select: RootSelect,
) -> Result<NullProjection, RayError> {
    let mut a = form[(0, 0)];
    let mut b = 0.0;
    let mut c = 0.0;
    for i in 0..3 {
        b += 2.0 * form[(0, i + 1)] * spatial[i];
        for j in 0..3 {
            c += form[(i + 1, j + 1)] * spatial[i] * spatial[j];
        }
    }
    let k_norm = 1.0 + spatial.iter().map(|v| v * v).sum::<f64>();
    let scale = form.amax() * k_norm;
    let tol = 1e-12 * scale;
    if a.abs() <= tol {
        a = 0.0;
    }
    if b.abs() <= tol {
        b = 0.0;
    }
    if c.abs() <= tol {
        c = 0.0;
    }

    let with_k0 = |k0: f64, kind: RootKind| NullProjection {
        k: Vector4::new(k0, spatial[0], spatial[1], spatial[2]),
        kind,
    };

    if a == 0.0 {
        if b == 0.0 {
            return if c == 0.0 {
                Err(RayError::FullyDegenerate)
            } else {
                Err(RayError::NoRealRoot {
                    discriminant: f64::NEG_INFINITY,
                })
            };
        }
        return Ok(with_k0(-c / b, RootKind::Linear));
    }

    let disc = b * b - 4.0 * a * c;
    let disc_tol = 1e-12 * scale * scale;
    if disc < -disc_tol {
        return Err(RayError::NoRealRoot { discriminant: disc });
    }
    if disc.abs() <= disc_tol {
        return Ok(with_k0(-b / (2.0 * a), RootKind::Double));
    }
    let sqrt_disc = disc.sqrt();
    let r1 = (-b + sqrt_disc) / (2.0 * a);
    let r2 = (-b - sqrt_disc) / (2.0 * a);
    let k0 = match select {
        RootSelect::Future => r1.max(r2),
        RootSelect::Past => r1.min(r2),
    };
    Ok(with_k0(k0, RootKind::Simple))
}

/// Position-dependent cone form driving a ray.
pub trait FormField {
    /// Cone form at `x`, or `None` once `x` leaves the field's domain.
    fn form(&self, x: &Vector4<f64>) -> Option<Matrix4<f64>>;

    /// `d G / d x^a`; the default takes central differences of [`Self::form`]
    /// with the cube-root-of-epsilon step rule.
    fn form_gradient(&self, x: &Vector4<f64>) -> Option<[Matrix4<f64>; 4]> {
        fd_form_gradient(self, x)
    }

    /// Constant-coefficient fields transport the covector unchanged.
    fn is_constant(&self) -> bool {
        false
    }
}

/// Central-difference gradient of a cone form field.
pub fn fd_form_gradient<F: FormField + ?Sized>(
    field: &F,
    x: &Vector4<f64>,
) -> Option<[Matrix4<f64>; 4]> {
    let base = f64::EPSILON.cbrt();
    let mut out = [Matrix4::zeros(); 4];
    for a in 0..4 {
        let step = base * (1.0 + x[a].abs());
        let mut xp = *x;
        let mut xm = *x;
        xp[a] += step;
        xm[a] -= step;
        let gp = field.form(&xp)?;
        let gm = field.form(&xm)?;
        out[a] = (gp - gm) / (2.0 * step);
    }
    Some(out)
}

/// A cone form frozen in space.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantForm(pub Matrix4<f64>);

impl FormField for ConstantForm {
    fn form(&self, _x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        Some(self.0)
    }

    fn form_gradient(&self, _x: &Vector4<f64>) -> Option<[Matrix4<f64>; 4]> {
        Some([Matrix4::zeros(); 4])
    }

    fn is_constant(&self) -> bool {
        true
    }
}

/// One sample along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub lambda: f64,
    pub x: Vector4<f64>,
    pub k: Vector4<f64>,
    pub p_value: f64,
}

/// Why integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    SpanEnd,
    LeftDomain,
    DegenerateForm,
    StepUnderflow,
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::SpanEnd => "span_end",
            Termination::LeftDomain => "left_domain",
            Termination::DegenerateForm => "degenerate_form",
            Termination::StepUnderflow => "step_underflow",
        }
    }
}

/// Discretized bicharacteristic with conservation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RayTrace {
    pub branch: Branch,
    pub states: Vec<RayState>,
    pub max_drift: f64,
    pub termination: Termination,
}

/// Fixed-step RK4 controls with optional drift-driven step halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls {
    pub step: f64,
    /// When set, a step whose Hamiltonian drift exceeds this bound is
    /// rejected and retried at half the step.
    pub max_drift: Option<f64>,
    pub min_step: f64,
}

impl Default for StepControls {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_drift: None,
            min_step: 1e-12,
        }
    }
}

fn quad_value(form: &Matrix4<f64>, k: &Vector4<f64>) -> f64 {
    k.dot(&(form * k))
}

fn derivative<F: FormField>(
    field: &F,
    x: &Vector4<f64>,
    k: &Vector4<f64>,
) -> Option<(Vector4<f64>, Vector4<f64>)> {
    let form = field.form(x)?;
    let dx = form * k * 2.0;
    let dk = if field.is_constant() {
        Vector4::zeros()
    } else {
        let grad = field.form_gradient(x)?;
        Vector4::from_fn(|a, _| -quad_value(&grad[a], k))
    };
    Some((dx, dk))
}

fn rk4_step<F: FormField>(
    field: &F,
    x: &Vector4<f64>,
    k: &Vector4<f64>,
    h: f64,
) -> Option<(Vector4<f64>, Vector4<f64>)> {
    let (dx1, dk1) = derivative(field, x, k)?;
    let (dx2, dk2) = derivative(field, &(x + dx1 * (0.5 * h)), &(k + dk1 * (0.5 * h)))?;
    let (dx3, dk3) = derivative(field, &(x + dx2 * (0.5 * h)), &(k + dk2 * (0.5 * h)))?;
    let (dx4, dk4) = derivative(field, &(x + dx3 * h), &(k + dk3 * h))?;
    let xn = x + (dx1 + dx2 * 2.0 + dx3 * 2.0 + dx4) * (h / 6.0);
    let kn = k + (dk1 + dk2 * 2.0 + dk3 * 2.0 + dk4) * (h / 6.0);
    Some((xn, kn))
}

fn transport_degenerate(form: &Matrix4<f64>, k: &Vector4<f64>) -> bool {
    let velocity = form * k * 2.0;
    let scale = 2.0 * form.amax() * k.amax();
    scale > 0.0 && velocity.amax() <= 1e-12 * scale
}

/// Integrates a ray from `(x0, k0)` over `lambda` in `[0, span]`.
///
/// Degenerate-form encounters (zero transport velocity with a nonzero
/// covector) terminate the trace with a diagnostic rather than an error;
/// surfacing them is the point of the analysis.
pub fn integrate_ray<F: FormField>(
    field: &F,
    branch: Branch,
    x0: Vector4<f64>,
    k0: Vector4<f64>,
    span: f64,
    controls: &StepControls,
) -> RayTrace {
    let mut states = Vec::new();
    let trace = |states: Vec<RayState>, max_drift: f64, termination: Termination| RayTrace {
        branch,
        states,
        max_drift,
        termination,
    };

    let Some(form0) = field.form(&x0) else {
        return trace(states, 0.0, Termination::LeftDomain);
    };
    let p0 = quad_value(&form0, &k0);
    states.push(RayState {
        lambda: 0.0,
        x: x0,
        k: k0,
        p_value: p0,
    });
    if transport_degenerate(&form0, &k0) {
        return trace(states, 0.0, Termination::DegenerateForm);
    }

    let mut x = x0;
    let mut k = k0;
    let mut lambda = 0.0;
    let mut step = controls.step;
    let mut max_drift = 0.0f64;
    loop {
        let remaining = span - lambda;
        if remaining <= span * 1e-15 {
            return trace(states, max_drift, Termination::SpanEnd);
        }
        let h = step.min(remaining);
        let Some((xn, kn)) = rk4_step(field, &x, &k, h) else {
            return trace(states, max_drift, Termination::LeftDomain);
        };
        let Some(form) = field.form(&xn) else {
            return trace(states, max_drift, Termination::LeftDomain);
        };
        let p = quad_value(&form, &kn);
        let drift = (p - p0).abs();
        if let Some(bound) = controls.max_drift {
            if drift > bound {
                step *= 0.5;
                if step < controls.min_step {
                    return trace(states, max_drift, Termination::StepUnderflow);
                }
                continue;
            }
        }
        x = xn;
        k = kn;
        lambda += h;
        max_drift = max_drift.max(drift);
        states.push(RayState {
            lambda,
            x,
            k,
            p_value: p,
        });
        if transport_degenerate(&form, &k) {
            return trace(states, max_drift, Termination::DegenerateForm);
        }
    }
}

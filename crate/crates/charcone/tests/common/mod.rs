//! Shared randomized fixtures for the law tests.
#![allow(dead_code)]

use charcone::geometry::{JetSample, MetricSample, TargetMetricSample};
use charcone::TargetGeometry;
use nalgebra::{Matrix2x4, Matrix4, Vector2, Vector4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

/// Random first-order jet with Jacobian entries uniform in [-1, 1].
pub fn random_jet(rng: &mut ChaCha8Rng) -> JetSample {
    let jac = Matrix2x4::from_fn(|_, _| uniform(rng));
    let phi = Vector2::new(uniform(rng), uniform(rng));
    let x = Vector4::from_fn(|_, _| uniform(rng));
    JetSample::first_order(x, phi, jac)
}

/// Random second-order jet with symmetric Hessians.
pub fn random_jet2(rng: &mut ChaCha8Rng) -> JetSample {
    let first = random_jet(rng);
    let mut hess = [Matrix4::zeros(), Matrix4::zeros()];
    for component in &mut hess {
        for i in 0..4 {
            component[(i, i)] = uniform(rng);
            for j in (i + 1)..4 {
                let v = uniform(rng);
                component[(i, j)] = v;
                component[(j, i)] = v;
            }
        }
    }
    JetSample::with_hessian(first.x, first.phi, first.jac, hess).unwrap()
}

/// Random Lorentzian base metric, built by congruence of the flat one with
/// a well-conditioned transformation `T = I + 0.2 R`.
pub fn random_lorentzian(rng: &mut ChaCha8Rng) -> MetricSample {
    let t = Matrix4::identity() + Matrix4::from_fn(|_, _| 0.2 * uniform(rng));
    let d = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0));
    MetricSample::new(t.transpose() * d * t).expect("congruence of the flat metric is Lorentzian")
}

/// Random target metric drawn from the geometry catalog, including curved
/// charts.
pub fn random_target_metric(rng: &mut ChaCha8Rng, which: usize) -> TargetMetricSample {
    let y = Vector2::new(0.8 * uniform(rng), 0.8 * uniform(rng));
    match which % 4 {
        0 => TargetGeometry::Flat.metric(&y),
        1 => TargetGeometry::SphereStereographic.metric(&y),
        // Scaled into the unit disk (the raw box corner lies outside it).
        2 => TargetGeometry::PoincareDisk.metric(&(y * 0.7)),
        _ => TargetGeometry::CustomDiagonal {
            c: (1.6 * uniform(rng)).exp(),
        }
        .metric(&y),
    }
    .expect("catalog samples stay inside their chart domains")
}

/// Random antisymmetric 4x4 matrix; generically not a pullback form.
pub fn random_antisymmetric(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = uniform(rng);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

/// Nonlinearity parameter away from the pole of the second cone form.
pub fn random_xi(rng: &mut ChaCha8Rng, sigma2: f64) -> f64 {
    loop {
        let xi = rng.gen_range(-2.0..=2.0);
        if (1.0 + xi * sigma2).abs() > 0.05 {
            return xi;
        }
    }
}

pub fn random_covector(rng: &mut ChaCha8Rng) -> Vector4<f64> {
    Vector4::from_fn(|_, _| uniform(rng))
}

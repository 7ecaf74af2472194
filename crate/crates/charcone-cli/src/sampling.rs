//! Seed-derived per-sample random streams for verify mode.
//!
//! Every sample index gets its own counter-mode stream of the scenario
//! seed, so results are independent of worker count and iteration order.

use charcone::geometry::{JetSample, MetricSample, TargetMetricSample};
use charcone::{strain_and_invariants, TargetGeometry};
use nalgebra::{Matrix2x4, Matrix4, Vector2, Vector4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dedicated stream for sample `index` of a seeded run.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

/// One verify-mode draw: a random jet, target metric, admissible
/// nonlinearity parameter and covector.
pub struct VerifySample {
    pub jet: JetSample,
    pub h: TargetMetricSample,
    pub sigma2: f64,
    pub xi: f64,
    pub k: Vector4<f64>,
    /// Generic antisymmetric matrix (not a pullback) and its coefficient
    /// for the determinant identity.
    pub antisymmetric: Matrix4<f64>,
    pub f: f64,
}

/// Draws the verify-mode sample for `index`: Jacobian entries uniform in
/// [-1, 1], target metrics cycling through the geometry catalog with
/// parameters inside their domains, `xi` in [-2, 2] away from the pole of
/// the second cone form.
pub fn draw_sample(seed: u64, index: u64, g: &MetricSample) -> VerifySample {
    let mut rng = sample_rng(seed, index);

    let jac = Matrix2x4::from_fn(|_, _| uniform(&mut rng));
    let phi = Vector2::new(uniform(&mut rng), uniform(&mut rng));
    let jet = JetSample::first_order(Vector4::zeros(), phi, jac);

    let y = Vector2::new(0.8 * uniform(&mut rng), 0.8 * uniform(&mut rng));
    let h = match index % 4 {
        0 => TargetGeometry::Flat.metric(&y),
        1 => TargetGeometry::SphereStereographic.metric(&y),
        2 => TargetGeometry::PoincareDisk.metric(&(y * 0.7)),
        _ => TargetGeometry::CustomDiagonal {
            c: (1.6 * uniform(&mut rng)).exp(),
        }
        .metric(&y),
    }
    .expect("catalog samples stay inside their chart domains");

    let sigma2 = strain_and_invariants(&charcone::pullback_metric(&jet, &h), g).sigma2();
    let xi = loop {
        let candidate = rng.gen_range(-2.0..=2.0);
        if (1.0 + candidate * sigma2).abs() > 0.05 {
            break candidate;
        }
    };

    let k = Vector4::from_fn(|_, _| uniform(&mut rng));

    let mut antisymmetric = Matrix4::zeros();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = uniform(&mut rng);
            antisymmetric[(i, j)] = v;
            antisymmetric[(j, i)] = -v;
        }
    }
    let f = uniform(&mut rng);

    VerifySample {
        jet,
        h,
        sigma2,
        xi,
        k,
        antisymmetric,
        f,
    }
}

/// Random base point inside per-axis ranges, on its own stream.
pub fn draw_point(seed: u64, index: u64, ranges: &[[f64; 2]; 4]) -> Vector4<f64> {
    let mut rng = sample_rng(seed, index);
    Vector4::from_fn(|a, _| {
        let [lo, hi] = ranges[a];
        if lo == hi {
            lo
        } else {
            rng.gen_range(lo..=hi)
        }
    })
}

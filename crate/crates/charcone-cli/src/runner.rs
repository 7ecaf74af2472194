//! Executes a scenario: point/grid/random verdict sweeps, ray integration
//! and verify-mode identity checks. Sweeps distribute across a rayon pool;
//! per-sample streams and index-ordered collection keep the output
//! independent of worker count.

use crate::report::{
    Aggregate, Artifacts, IdentityCheck, PointErrorRecord, PointRecord, RayReport, Report,
    VerifyReport, EXPONENT_NOTE, TOOL_NAME, TOOL_VERSION,
};
use crate::sampling::{draw_point, draw_sample};
use crate::scenario::{Mode, Scenario};
use charcone::geometry::two_form::PullbackForm;
use charcone::rays::FormField;
use charcone::{
    cayley_hamilton_residual, degeneracy_report, determinant_identity, factorization_residual,
    integrate_ray, null_project, pullback_metric, pullback_two_form, strain_and_invariants,
    Background, BackgroundField, Branch, LagrangianModel, MetricSample, RayTrace, RootKind,
    StepControls, TargetGeometry,
};
use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;

/// Everything a finished run produces.
pub struct RunOutcome {
    pub report: Report,
    pub trace: Option<RayTrace>,
    pub exit_code: i32,
}

impl RunOutcome {
    pub fn artifacts(&self) -> Artifacts {
        Artifacts::render(&self.report, self.trace.as_ref())
    }
}

/// Runs a validated scenario on `threads` workers with the effective seed.
pub fn execute(scenario: &Scenario, seed: u64, threads: usize) -> RunOutcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool construction");
    pool.install(|| execute_inner(scenario, seed))
}

fn execute_inner(scenario: &Scenario, seed: u64) -> RunOutcome {
    // Echo the effective seed so a report fully reproduces its run.
    let mut echo = scenario.clone();
    echo.analysis.seed = seed;

    let mut report = Report {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        seed,
        mode: scenario.analysis.mode.label(),
        scenario: echo,
        points: Vec::new(),
        point_errors: Vec::new(),
        aggregate: None,
        verify: None,
        ray: None,
    };
    let mut trace = None;
    let mut exit_code = 0;

    match scenario.analysis.mode {
        Mode::Point => {
            let x = scenario.analysis.point.as_ref().expect("validated").x;
            sweep(scenario, vec![Vector4::from_column_slice(&x)], &mut report);
        }
        Mode::Grid => {
            let grid = scenario.analysis.grid.as_ref().expect("validated");
            let mut xs = Vec::new();
            for i0 in 0..grid.counts[0] {
                for i1 in 0..grid.counts[1] {
                    for i2 in 0..grid.counts[2] {
                        for i3 in 0..grid.counts[3] {
                            let idx = [i0, i1, i2, i3];
                            let x = Vector4::from_fn(|a, _| {
                                let [lo, hi] = grid.ranges[a];
                                if grid.counts[a] == 1 {
                                    lo
                                } else {
                                    lo + (hi - lo) * idx[a] as f64 / (grid.counts[a] - 1) as f64
                                }
                            });
                            xs.push(x);
                        }
                    }
                }
            }
            sweep(scenario, xs, &mut report);
        }
        Mode::Random => {
            let random = scenario.analysis.random.as_ref().expect("validated");
            let xs = (0..random.count)
                .map(|i| draw_point(seed, i as u64, &random.ranges))
                .collect();
            sweep(scenario, xs, &mut report);
        }
        Mode::Ray => {
            trace = run_ray(scenario, &mut report);
        }
        Mode::Verify => {
            let verify = run_verify(scenario, seed);
            if !verify.passed {
                exit_code = 1;
            }
            report.verify = Some(verify);
        }
    }

    RunOutcome {
        report,
        trace,
        exit_code,
    }
}

/// Verdict sweep over base points; results ordered by point index.
fn sweep(scenario: &Scenario, xs: Vec<Vector4<f64>>, report: &mut Report) {
    let g = scenario.base_metric();
    let geometry = scenario.target_geometry();
    let model = scenario.lagrangian_model().expect("validated");
    let background = scenario.background_map();
    let rank_tol = scenario.tolerances.rank;

    let results: Vec<(usize, Result<PointRecord, String>)> = xs
        .par_iter()
        .enumerate()
        .map(|(index, x)| {
            let record = analyze_point(&background, &geometry, &g, &model, rank_tol, index, x);
            (index, record)
        })
        .collect();

    for (index, result) in results {
        match result {
            Ok(record) => report.points.push(record),
            Err(error) => report.point_errors.push(PointErrorRecord {
                index,
                x: [xs[index][0], xs[index][1], xs[index][2], xs[index][3]],
                error,
            }),
        }
    }
    report.aggregate = Some(Aggregate::from_points(
        &report.points,
        report.point_errors.len(),
    ));
}

fn analyze_point(
    background: &Background,
    geometry: &TargetGeometry,
    g: &MetricSample,
    model: &LagrangianModel,
    rank_tol: f64,
    index: usize,
    x: &Vector4<f64>,
) -> Result<PointRecord, String> {
    let jet = charcone::jet_eval(background, geometry, x).map_err(|e| e.to_string())?;
    let h = geometry.metric(&jet.phi).map_err(|e| e.to_string())?;
    let sigma2 = strain_and_invariants(&pullback_metric(&jet, &h), g).sigma2();
    let eval = model.eval(sigma2).map_err(|e| e.to_string())?;
    let verdict = degeneracy_report(&jet, g, &h, eval.xi, rank_tol);
    Ok(PointRecord::new(index, [x[0], x[1], x[2], x[3]], &verdict))
}

fn run_ray(scenario: &Scenario, report: &mut Report) -> Option<RayTrace> {
    let params = scenario.analysis.ray.as_ref().expect("validated");
    let g = scenario.base_metric();
    let geometry = scenario.target_geometry();
    let model = scenario.lagrangian_model().expect("validated");
    let background = scenario.background_map();
    let branch = if params.branch == 1 {
        Branch::One
    } else {
        Branch::Two
    };
    let field = BackgroundField {
        background: &background,
        geometry: &geometry,
        base: &g,
        model: &model,
        branch,
    };
    let x0 = Vector4::from_column_slice(&params.x0);

    let mut ray_report = RayReport {
        branch: params.branch,
        initial_k: None,
        root_kind: None,
        projection_error: None,
        states: 0,
        max_drift: 0.0,
        termination: "not_started",
    };

    let form0 = match field.form(&x0) {
        Some(form) => form,
        None => {
            ray_report.projection_error =
                Some("cone form undefined at the ray start point".to_string());
            report.ray = Some(ray_report);
            return None;
        }
    };
    let projection = match null_project(&form0, params.k_spatial, params.root.into()) {
        Ok(p) => p,
        Err(err) => {
            ray_report.projection_error = Some(err.to_string());
            report.ray = Some(ray_report);
            return None;
        }
    };
    ray_report.initial_k = Some([
        projection.k[0],
        projection.k[1],
        projection.k[2],
        projection.k[3],
    ]);
    ray_report.root_kind = Some(match projection.kind {
        RootKind::Simple => "simple",
        RootKind::Double => "double",
        RootKind::Linear => "linear",
    });

    let controls = StepControls {
        step: params.step,
        max_drift: params.max_drift,
        ..Default::default()
    };
    let trace = integrate_ray(&field, branch, x0, projection.k, params.span, &controls);
    ray_report.states = trace.states.len();
    ray_report.max_drift = trace.max_drift;
    ray_report.termination = trace.termination.label();
    report.ray = Some(ray_report);
    Some(trace)
}

/// Per-sample identity residuals, reduced to maxima across the sweep.
#[derive(Debug, Clone, Copy, Default)]
struct Residuals {
    factorization: f64,
    form_square: f64,
    form_dual: f64,
    cayley_hamilton: f64,
    u_squared: f64,
    det_g2_exponent: f64,
}

impl Residuals {
    fn max(self, other: Self) -> Self {
        Self {
            factorization: self.factorization.max(other.factorization),
            form_square: self.form_square.max(other.form_square),
            form_dual: self.form_dual.max(other.form_dual),
            cayley_hamilton: self.cayley_hamilton.max(other.cayley_hamilton),
            u_squared: self.u_squared.max(other.u_squared),
            det_g2_exponent: self.det_g2_exponent.max(other.det_g2_exponent),
        }
    }
}

fn verify_sample(seed: u64, index: u64, g: &MetricSample) -> Residuals {
    let s = draw_sample(seed, index, g);
    let strain = strain_and_invariants(&pullback_metric(&s.jet, &s.h), g);
    let form = pullback_two_form(&s.jet, &s.h, g);

    let factorization = factorization_residual(&s.jet, g, &s.h, s.xi, &s.k);

    let two_sigma2 = 2.0 * strain.sigma2();
    let form_square = (form.hh - two_sigma2).abs() / (1.0 + form.hh.abs() + two_sigma2.abs());

    let dual_scale = 16.0 * form.h_lower.amax() * form.h_upper.amax();
    let form_dual = form.hdh.abs() / (1.0 + dual_scale);

    let cayley_hamilton = cayley_hamilton_residual(&strain);

    let generic = PullbackForm::from_antisymmetric(s.antisymmetric, g);
    let u_squared = determinant_identity(&generic, s.f).residual;

    let det_g2 = (Matrix4::identity() - form.hsq_mixed * s.xi).determinant() / g.det();
    let closed = (1.0 + s.xi * strain.sigma2()).powi(2) / g.det();
    let det_g2_exponent = (det_g2 - closed).abs() / (1.0 + det_g2.abs());

    Residuals {
        factorization,
        form_square,
        form_dual,
        cayley_hamilton,
        u_squared,
        det_g2_exponent,
    }
}

fn run_verify(scenario: &Scenario, seed: u64) -> VerifyReport {
    let samples = scenario.analysis.verify.as_ref().expect("validated").samples;
    let g = scenario.base_metric();

    let worst = (0..samples as u64)
        .into_par_iter()
        .map(|i| verify_sample(seed, i, &g))
        .reduce(Residuals::default, Residuals::max);

    let factorization_tol = scenario.tolerances.factorization;
    let identities = vec![
        IdentityCheck {
            name: "factorization",
            max_residual: worst.factorization,
            threshold: factorization_tol,
            pass: worst.factorization <= factorization_tol,
        },
        IdentityCheck {
            name: "form_square_vs_sigma2",
            max_residual: worst.form_square,
            threshold: 1e-12,
            pass: worst.form_square <= 1e-12,
        },
        IdentityCheck {
            name: "form_dual_contraction",
            max_residual: worst.form_dual,
            threshold: 1e-12,
            pass: worst.form_dual <= 1e-12,
        },
        IdentityCheck {
            name: "cayley_hamilton",
            max_residual: worst.cayley_hamilton,
            threshold: 1e-12,
            pass: worst.cayley_hamilton <= 1e-12,
        },
        IdentityCheck {
            name: "determinant_u_squared",
            max_residual: worst.u_squared,
            threshold: 1e-10,
            pass: worst.u_squared <= 1e-10,
        },
        IdentityCheck {
            name: "det_g2_exponent",
            max_residual: worst.det_g2_exponent,
            threshold: 1e-10,
            pass: worst.det_g2_exponent <= 1e-10,
        },
    ];
    let passed = identities.iter().all(|c| c.pass);
    VerifyReport {
        samples,
        identities,
        det_g2_exponent: 2,
        det_g2_exponent_note: EXPONENT_NOTE,
        passed,
    }
}

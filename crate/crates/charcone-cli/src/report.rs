//! Report data model and the deterministic artifact writers.
//!
//! `report.json` carries the full scenario echo plus per-mode results;
//! `points.csv` one row per analyzed point; `ray.csv` one row per ray
//! state. Column order and field names are part of the external contract
//! and frozen by golden-file tests. All floats carry 17 significant digits.

use crate::jsonfmt::{fmt_f64, to_json_bytes};
use crate::scenario::Scenario;
use charcone::{PointVerdict, RayTrace};
use serde::Serialize;
use std::io;
use std::path::Path;

pub const TOOL_NAME: &str = "charcone";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub mode: &'static str,
    pub scenario: Scenario,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_errors: Vec<PointErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<Aggregate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<RayReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub index: usize,
    pub x: [f64; 4],
    pub sigma2: f64,
    pub xi: f64,
    pub det_g1: f64,
    pub det_g2: f64,
    pub inertia_g1: [usize; 3],
    pub inertia_g2: [usize; 3],
    pub kernel_g1: Vec<[f64; 4]>,
    pub hyperbolic: bool,
    pub notes: Vec<String>,
}

impl PointRecord {
    pub fn new(index: usize, x: [f64; 4], verdict: &PointVerdict) -> Self {
        Self {
            index,
            x,
            sigma2: verdict.sigma2,
            xi: verdict.xi,
            det_g1: verdict.det_g1,
            det_g2: verdict.det_g2,
            inertia_g1: verdict.inertia_g1.as_array(),
            inertia_g2: verdict.inertia_g2.as_array(),
            kernel_g1: verdict
                .kernel_g1
                .iter()
                .map(|v| [v[0], v[1], v[2], v[3]])
                .collect(),
            hyperbolic: verdict.hyperbolic,
            notes: verdict.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointErrorRecord {
    pub index: usize,
    pub x: [f64; 4],
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub points: usize,
    pub failed_points: usize,
    pub singular_g1_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_det_g2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_det_g2: Option<f64>,
    pub verdict: &'static str,
}

pub const VERDICT_HYPERBOLIC: &str = "HYPERBOLIC";
pub const VERDICT_NOT_HYPERBOLIC: &str = "NOT_HYPERBOLIC";

impl Aggregate {
    pub fn from_points(points: &[PointRecord], failed_points: usize) -> Self {
        let singular = points.iter().filter(|p| p.inertia_g1[1] > 0).count();
        let not_hyperbolic = points.iter().any(|p| !p.hyperbolic);
        Self {
            points: points.len(),
            failed_points,
            singular_g1_fraction: if points.is_empty() {
                0.0
            } else {
                singular as f64 / points.len() as f64
            },
            min_det_g2: points
                .iter()
                .map(|p| p.det_g2)
                .min_by(f64::total_cmp),
            max_det_g2: points
                .iter()
                .map(|p| p.det_g2)
                .max_by(f64::total_cmp),
            verdict: if points.is_empty() || not_hyperbolic {
                VERDICT_NOT_HYPERBOLIC
            } else {
                VERDICT_HYPERBOLIC
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub identities: Vec<IdentityCheck>,
    /// Exponent of `(1 + xi sigma_2)` in `det G2 = det(g)^-1 (1 + xi
    /// sigma_2)^n`, as confirmed by the determinant oracle.
    pub det_g2_exponent: u32,
    pub det_g2_exponent_note: &'static str,
    pub passed: bool,
}

pub const EXPONENT_NOTE: &str = "determinant oracle confirms the squared factor: \
det G2 = det(g)^-1 (1 + xi sigma2)^2; the unsquared variant fails on generic samples";

#[derive(Debug, Clone, Serialize)]
pub struct RayReport {
    pub branch: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_k: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection_error: Option<String>,
    pub states: usize,
    pub max_drift: f64,
    pub termination: &'static str,
}

/// CSV of per-point verdicts. Header and column order are frozen.
pub fn points_csv(points: &[PointRecord]) -> String {
    let mut out = String::from(
        "index,x0,x1,x2,x3,sigma2,xi,detG1,detG2,n+G1,n0G1,n-G1,n+G2,n0G2,n-G2,hyperbolic\n",
    );
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            p.index,
            fmt_f64(p.x[0]),
            fmt_f64(p.x[1]),
            fmt_f64(p.x[2]),
            fmt_f64(p.x[3]),
            fmt_f64(p.sigma2),
            fmt_f64(p.xi),
            fmt_f64(p.det_g1),
            fmt_f64(p.det_g2),
            p.inertia_g1[0],
            p.inertia_g1[1],
            p.inertia_g1[2],
            p.inertia_g2[0],
            p.inertia_g2[1],
            p.inertia_g2[2],
            p.hyperbolic,
        ));
    }
    out
}

/// CSV of ray states. Header and column order are frozen.
pub fn ray_csv(trace: Option<&RayTrace>) -> String {
    let mut out = String::from("lambda,x0,x1,x2,x3,k0,k1,k2,k3,P\n");
    if let Some(trace) = trace {
        for s in &trace.states {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(s.lambda),
                fmt_f64(s.x[0]),
                fmt_f64(s.x[1]),
                fmt_f64(s.x[2]),
                fmt_f64(s.x[3]),
                fmt_f64(s.k[0]),
                fmt_f64(s.k[1]),
                fmt_f64(s.k[2]),
                fmt_f64(s.k[3]),
                fmt_f64(s.p_value),
            ));
        }
    }
    out
}

/// Artifacts produced by a run, ready to be written.
pub struct Artifacts {
    pub report_json: Vec<u8>,
    pub points_csv: String,
    pub ray_csv: Option<String>,
}

impl Artifacts {
    pub fn render(report: &Report, trace: Option<&RayTrace>) -> Self {
        Self {
            report_json: to_json_bytes(report),
            points_csv: points_csv(&report.points),
            ray_csv: report.ray.as_ref().map(|_| ray_csv(trace)),
        }
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), &self.report_json)?;
        std::fs::write(dir.join("points.csv"), self.points_csv.as_bytes())?;
        if let Some(ray) = &self.ray_csv {
            std::fs::write(dir.join("ray.csv"), ray.as_bytes())?;
        }
        Ok(())
    }
}

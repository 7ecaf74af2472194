//! Scenario configuration: a TOML file with nested sections selecting the
//! base metric, target geometry, Lagrangian model, background, analysis
//! mode and tolerances. The grammar is documented in the repository README
//! and frozen by golden-file tests.

use charcone::{Background, LagrangianModel, MetricSample, RootSelect, TargetGeometry};
use nalgebra::{Matrix2x4, Vector2, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid scenario value at `{key}`: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub base: BaseSection,
    pub target: TargetSection,
    pub model: ModelSection,
    pub background: BackgroundSection,
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub metric: BaseMetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMetric {
    Minkowski,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub geometry: GeometryKind,
    /// Diagonal parameter, required by (and only by) `custom_diagonal`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Flat,
    SphereStereographic,
    PoincareDisk,
    CustomDiagonal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub c: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSection {
    pub family: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y0: Option<[f64; 2]>,
    /// Jacobian of a linear map, two rows of four entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[f64; 4]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amp1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amp2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    ConstantMap,
    LinearMap,
    PlaneWave,
    ProductWave,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<PointParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<RayParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Point,
    Grid,
    Random,
    Ray,
    Verify,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Point => "point",
            Mode::Grid => "grid",
            Mode::Random => "random",
            Mode::Ray => "ray",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointParams {
    pub x: [f64; 4],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    /// Inclusive [lo, hi] per axis.
    pub ranges: [[f64; 2]; 4],
    pub counts: [usize; 4],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomParams {
    pub count: usize,
    pub ranges: [[f64; 2]; 4],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayParams {
    pub x0: [f64; 4],
    pub k_spatial: [f64; 3],
    pub branch: u8,
    #[serde(default = "default_root")]
    pub root: RootChoice,
    pub span: f64,
    pub step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_drift: Option<f64>,
}

fn default_root() -> RootChoice {
    RootChoice::Future
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootChoice {
    Future,
    Past,
}

impl From<RootChoice> for RootSelect {
    fn from(value: RootChoice) -> Self {
        match value {
            RootChoice::Future => RootSelect::Future,
            RootChoice::Past => RootSelect::Past,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rank: f64,
    pub factorization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            factorization: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

impl Scenario {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let scenario: Scenario = toml::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.target.geometry {
            GeometryKind::CustomDiagonal => {
                let c = self.target.c.ok_or_else(|| {
                    ConfigError::invalid("target.c", "required for geometry = \"custom_diagonal\"")
                })?;
                if !(c.is_finite() && c > 0.0) {
                    return Err(ConfigError::invalid("target.c", "must be a positive real"));
                }
            }
            _ => {
                if self.target.c.is_some() {
                    return Err(ConfigError::invalid(
                        "target.c",
                        "only valid for geometry = \"custom_diagonal\"",
                    ));
                }
            }
        }

        if !(self.model.q.is_finite() && self.model.q > 0.0) {
            return Err(ConfigError::invalid("model.q", "must be a positive real"));
        }
        if !self.model.c.is_finite() {
            return Err(ConfigError::invalid("model.c", "must be finite"));
        }

        self.validate_background()?;

        if self.tolerances.rank <= 0.0 || self.tolerances.factorization <= 0.0 {
            return Err(ConfigError::invalid("tolerances", "must be positive"));
        }

        match self.analysis.mode {
            Mode::Point => {
                self.analysis.point.as_ref().ok_or_else(|| {
                    ConfigError::invalid("analysis.point", "section required for mode = \"point\"")
                })?;
            }
            Mode::Grid => {
                let grid = self.analysis.grid.as_ref().ok_or_else(|| {
                    ConfigError::invalid("analysis.grid", "section required for mode = \"grid\"")
                })?;
                for (axis, (&count, range)) in
                    grid.counts.iter().zip(grid.ranges.iter()).enumerate()
                {
                    if count < 1 {
                        return Err(ConfigError::invalid(
                            "analysis.grid.counts",
                            format!("axis {axis}: count must be at least 1"),
                        ));
                    }
                    if range[1] < range[0] {
                        return Err(ConfigError::invalid(
                            "analysis.grid.ranges",
                            format!("axis {axis}: range must satisfy lo <= hi"),
                        ));
                    }
                }
            }
            Mode::Random => {
                let random = self.analysis.random.as_ref().ok_or_else(|| {
                    ConfigError::invalid(
                        "analysis.random",
                        "section required for mode = \"random\"",
                    )
                })?;
                if random.count < 1 {
                    return Err(ConfigError::invalid(
                        "analysis.random.count",
                        "must be at least 1",
                    ));
                }
                for (axis, range) in random.ranges.iter().enumerate() {
                    if range[1] < range[0] {
                        return Err(ConfigError::invalid(
                            "analysis.random.ranges",
                            format!("axis {axis}: range must satisfy lo <= hi"),
                        ));
                    }
                }
            }
            Mode::Ray => {
                let ray = self.analysis.ray.as_ref().ok_or_else(|| {
                    ConfigError::invalid("analysis.ray", "section required for mode = \"ray\"")
                })?;
                if ray.branch != 1 && ray.branch != 2 {
                    return Err(ConfigError::invalid("analysis.ray.branch", "must be 1 or 2"));
                }
                if !(ray.span.is_finite() && ray.span > 0.0) {
                    return Err(ConfigError::invalid("analysis.ray.span", "must be positive"));
                }
                if !(ray.step.is_finite() && ray.step > 0.0) {
                    return Err(ConfigError::invalid("analysis.ray.step", "must be positive"));
                }
            }
            Mode::Verify => {
                let verify = self.analysis.verify.as_ref().ok_or_else(|| {
                    ConfigError::invalid(
                        "analysis.verify",
                        "section required for mode = \"verify\"",
                    )
                })?;
                if verify.samples < 1 {
                    return Err(ConfigError::invalid(
                        "analysis.verify.samples",
                        "must be at least 1",
                    ));
                }
            }
        }
        Ok(())
    }

    fn validate_background(&self) -> Result<(), ConfigError> {
        let bg = &self.background;
        let forbid = |key: &str, present: bool| -> Result<(), ConfigError> {
            if present {
                Err(ConfigError::invalid(
                    &format!("background.{key}"),
                    format!("not a parameter of family = \"{:?}\"", bg.family),
                ))
            } else {
                Ok(())
            }
        };
        match bg.family {
            FamilyKind::ConstantMap => {
                forbid("matrix", bg.matrix.is_some())?;
                forbid("amp1", bg.amp1.is_some())?;
                forbid("amp2", bg.amp2.is_some())?;
                forbid("kappa", bg.kappa.is_some())?;
                forbid("mu", bg.mu.is_some())?;
            }
            FamilyKind::LinearMap => {
                if bg.matrix.is_none() {
                    return Err(ConfigError::invalid(
                        "background.matrix",
                        "required for family = \"linear_map\"",
                    ));
                }
                forbid("amp1", bg.amp1.is_some())?;
                forbid("amp2", bg.amp2.is_some())?;
                forbid("kappa", bg.kappa.is_some())?;
                forbid("mu", bg.mu.is_some())?;
            }
            FamilyKind::PlaneWave => {
                if bg.kappa.is_none() {
                    return Err(ConfigError::invalid(
                        "background.kappa",
                        "required for family = \"plane_wave\"",
                    ));
                }
                forbid("matrix", bg.matrix.is_some())?;
                forbid("mu", bg.mu.is_some())?;
                forbid("y0", bg.y0.is_some())?;
            }
            FamilyKind::ProductWave => {
                let kappa = bg.kappa.ok_or_else(|| {
                    ConfigError::invalid(
                        "background.kappa",
                        "required for family = \"product_wave\"",
                    )
                })?;
                let mu = bg.mu.ok_or_else(|| {
                    ConfigError::invalid(
                        "background.mu",
                        "required for family = \"product_wave\"",
                    )
                })?;
                if kappa == mu {
                    return Err(ConfigError::invalid(
                        "background.mu",
                        "must differ from kappa",
                    ));
                }
                forbid("matrix", bg.matrix.is_some())?;
                forbid("y0", bg.y0.is_some())?;
            }
        }
        Ok(())
    }

    pub fn base_metric(&self) -> MetricSample {
        match self.base.metric {
            BaseMetric::Minkowski => MetricSample::minkowski(),
        }
    }

    pub fn target_geometry(&self) -> TargetGeometry {
        match self.target.geometry {
            GeometryKind::Flat => TargetGeometry::Flat,
            GeometryKind::SphereStereographic => TargetGeometry::SphereStereographic,
            GeometryKind::PoincareDisk => TargetGeometry::PoincareDisk,
            GeometryKind::CustomDiagonal => TargetGeometry::CustomDiagonal {
                c: self.target.c.expect("validated"),
            },
        }
    }

    pub fn lagrangian_model(&self) -> Result<LagrangianModel, ConfigError> {
        LagrangianModel::power(self.model.c, self.model.q)
            .map_err(|e| ConfigError::invalid("model", e.to_string()))
    }

    pub fn background_map(&self) -> Background {
        let bg = &self.background;
        let y0 = bg.y0.map_or_else(Vector2::zeros, |v| Vector2::new(v[0], v[1]));
        match bg.family {
            FamilyKind::ConstantMap => Background::ConstantMap { y0 },
            FamilyKind::LinearMap => {
                let m = bg.matrix.expect("validated");
                let mut c = Matrix2x4::zeros();
                for (row, entries) in m.iter().enumerate() {
                    for (col, &v) in entries.iter().enumerate() {
                        c[(row, col)] = v;
                    }
                }
                Background::LinearMap { c, y0 }
            }
            FamilyKind::PlaneWave => Background::PlaneWave {
                a: bg.amp1.unwrap_or(1.0),
                b: bg.amp2.unwrap_or(1.0),
                kappa: Vector4::from_column_slice(&bg.kappa.expect("validated")),
            },
            FamilyKind::ProductWave => Background::ProductWave {
                a: bg.amp1.unwrap_or(1.0),
                b: bg.amp2.unwrap_or(1.0),
                kappa: Vector4::from_column_slice(&bg.kappa.expect("validated")),
                mu: Vector4::from_column_slice(&bg.mu.expect("validated")),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [base]
        metric = "minkowski"

        [target]
        geometry = "flat"

        [model]
        c = -0.5
        q = 1.0

        [background]
        family = "linear_map"
        matrix = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]

        [analysis]
        mode = "point"
        seed = 42

        [analysis.point]
        x = [0.0, 0.0, 0.0, 0.0]
    "#;

    #[test]
    fn parses_minimal_scenario() {
        let scenario = Scenario::parse_str(MINIMAL).unwrap();
        assert_eq!(scenario.analysis.mode, Mode::Point);
        assert_eq!(scenario.analysis.seed, 42);
        assert_eq!(scenario.tolerances.rank, 1e-9);
        assert!(scenario.lagrangian_model().is_ok());
    }

    #[test]
    fn rejects_unknown_mode() {
        let text = MINIMAL.replace("mode = \"point\"", "mode = \"banana\"");
        let err = Scenario::parse_str(&text).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("banana") || message.contains("mode"), "{message}");
    }

    #[test]
    fn rejects_unknown_key() {
        let text = format!("{MINIMAL}\n[extra]\nkey = 1\n");
        assert!(Scenario::parse_str(&text).is_err());
    }

    #[test]
    fn rejects_missing_mode_section() {
        let text = MINIMAL.replace("mode = \"point\"", "mode = \"grid\"");
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("analysis.grid"));
    }

    #[test]
    fn rejects_foreign_family_parameter() {
        let text = MINIMAL.replace(
            "matrix = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]",
            "matrix = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]\nkappa = [0.0, 1.0, 0.0, 0.0]",
        );
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("background.kappa"));
    }

    #[test]
    fn requires_custom_diagonal_parameter() {
        let text = MINIMAL.replace("geometry = \"flat\"", "geometry = \"custom_diagonal\"");
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("target.c"));
    }

    #[test]
    fn rejects_zero_grid_count() {
        let text = MINIMAL.replace("mode = \"point\"", "mode = \"grid\"").replace(
            "[analysis.point]\n        x = [0.0, 0.0, 0.0, 0.0]",
            "[analysis.grid]\n        ranges = [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]\n        counts = [2, 0, 2, 2]",
        );
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("analysis.grid.counts"));
    }

    #[test]
    fn rejects_nonpositive_tolerances() {
        let text = format!("{MINIMAL}\n[tolerances]\nrank = 0.0\n");
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("tolerances"));
    }

    #[test]
    fn rejects_inverted_random_range() {
        let text = MINIMAL.replace("mode = \"point\"", "mode = \"random\"").replace(
            "[analysis.point]\n        x = [0.0, 0.0, 0.0, 0.0]",
            "[analysis.random]\n        count = 5\n        ranges = [[1.0, -1.0], [0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]",
        );
        let err = Scenario::parse_str(&text).unwrap_err();
        assert!(err.to_string().contains("analysis.random.ranges"));
    }
}

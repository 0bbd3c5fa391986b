use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::scalar::{parse_rational, Rational};
use crate::spaceform::GeometryKind;

/// A polynomial in `t`, optionally depending on the family parameter `λ`.
/// Coefficients are exact decimal or fraction strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    /// `[c₀, c₁, …]`, the coefficient of `tⁱ`.
    Univariate(Vec<String>),
    /// `rows[i][j]` multiplies `tⁱ λʲ`.
    Bivariate(Vec<Vec<String>>),
}

impl PolySpec {
    pub fn to_bipoly(&self) -> Result<BiPoly> {
        let parse = |s: &String| parse_rational(s).ok_or_else(|| Error::Config(format!("not an exact number: {s:?}")));
        let coeffs: Vec<Vec<Rational>> = match self {
            PolySpec::Univariate(c) => c.iter().map(|s| parse(s).map(|r| vec![r])).collect::<Result<_>>()?,
            PolySpec::Bivariate(rows) => {
                rows.iter().map(|row| row.iter().map(parse).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?
            }
        };
        Ok(BiPoly { coeffs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormId {
    /// Unit-speed helix in `E³` with its osculating frame.
    Helix,
    /// Unit circle in `E³` with its osculating frame.
    UnitCircle,
    /// Unit circle in `E³` with `e₃` radial.
    CircleRadial,
    /// `(A cos t, A sin t, B cos 2t, B sin 2t)` on `S³`.
    Clifford,
    /// `(A cosh t, A sinh t, B cos t, B sin t)` on `H³`.
    HyperbolicSpiral,
}

impl ClosedFormId {
    pub fn geometry(self) -> GeometryKind {
        match self {
            ClosedFormId::Clifford => GeometryKind::Spherical,
            ClosedFormId::HyperbolicSpiral => GeometryKind::Hyperbolic,
            _ => GeometryKind::Euclidean,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    /// Components `(x₀, …, x_{n+1})`; Euclidean curves carry `x₀ = 1`.
    Polynomial { components: Vec<PolySpec> },
    ClosedForm {
        id: ClosedFormId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        param: Option<f64>,
    },
    /// Curvatures `κ₁, κ₂, κ₃` of an adapted frame, as functions of arc length.
    Curvature { kappa: [PolySpec; 3] },
    /// Diagonal flag coordinates of a C-integral lift.
    Diagonal { diag: Vec<PolySpec> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn nodes(&self) -> Vec<f64> {
        if self.count < 2 {
            return vec![self.min];
        }
        (0..self.count).map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config(format!("grid {name}: empty range [{}, {}]", self.min, self.max)));
        }
        if self.count < 2 {
            return Err(Error::Config(format!("grid {name}: count must be at least 2")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    pub t: GridSpec,
    pub s: GridSpec,
    pub lambda: GridSpec,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            t: GridSpec { min: -1.0, max: 1.0, count: 200 },
            s: GridSpec { min: -1.5, max: 1.5, count: 50 },
            lambda: GridSpec { min: -0.1, max: 0.1, count: 81 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub ode_tol: f64,
    pub mesh_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank_tol: 1e-8, ode_tol: 1e-10, mesh_tol: 1e-9 }
    }
}

/// Output file names, resolved against the output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub mesh: PathBuf,
    pub locus: PathBuf,
    pub events: PathBuf,
    pub report: PathBuf,
    pub frames: PathBuf,
    pub enumeration: PathBuf,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            mesh: "mesh.obj".into(),
            locus: "locus.obj".into(),
            events: "events.csv".into(),
            report: "report.json".into(),
            frames: "frames.csv".into(),
            enumeration: "enumeration.csv".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Query {
    pub t: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_geometry")]
    pub geometry: GeometryKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub query: Query,
    #[serde(default = "default_r_max")]
    pub r_max: usize,
}

fn default_geometry() -> GeometryKind {
    GeometryKind::Euclidean
}

fn default_n() -> usize {
    2
}

fn default_r_max() -> usize {
    8
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            geometry: default_geometry(),
            n: default_n(),
            curve: None,
            grids: Grids::default(),
            tolerances: Tolerances::default(),
            outputs: Outputs::default(),
            seed: 0,
            query: Query::default(),
            r_max: default_r_max(),
        }
    }
}

impl RunConfig {
    /// Parses a config, or the `config` member of a previously written report.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let value = match value {
            serde_json::Value::Object(mut m) if m.contains_key("command") && m.contains_key("config") => {
                m.remove("config").expect("checked")
            }
            v => v,
        };
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.grids.t.validate("t")?;
        self.grids.s.validate("s")?;
        self.grids.lambda.validate("lambda")?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        let tol = self.tolerances;
        if ![tol.rank_tol, tol.ode_tol, tol.mesh_tol].iter().all(|&x| x.is_finite() && x > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.r_max < self.n + 1 {
            return Err(Error::Config(format!("r_max must be at least n + 1 = {}", self.n + 1)));
        }
        match &self.curve {
            Some(CurveSpec::Polynomial { components }) if components.len() != self.n + 2 => {
                Err(Error::Config(format!("polynomial curve needs n + 2 = {} components, got {}", self.n + 2, components.len())))
            }
            Some(CurveSpec::ClosedForm { id, .. }) if id.geometry() != self.geometry || self.n != 2 => Err(Error::Config(
                format!("closed form {id:?} lives in the {:?} model with n = 2", id.geometry()),
            )),
            Some(CurveSpec::Curvature { .. }) if self.n != 2 => Err(Error::Config("curvature data needs n = 2".into())),
            Some(CurveSpec::Diagonal { diag }) if diag.len() != self.n + 1 => {
                Err(Error::Config(format!("diagonal data needs n + 1 = {} entries, got {}", self.n + 1, diag.len())))
            }
            Some(spec) => spec.polys().into_iter().try_for_each(|p| p.to_bipoly().map(|_| ())),
            None => Ok(()),
        }
    }
}

impl CurveSpec {
    fn polys(&self) -> Vec<&PolySpec> {
        match self {
            CurveSpec::Polynomial { components } => components.iter().collect(),
            CurveSpec::ClosedForm { .. } => Vec::new(),
            CurveSpec::Curvature { kappa } => kappa.iter().collect(),
            CurveSpec::Diagonal { diag } => diag.iter().collect(),
        }
    }

    pub fn depends_on_lambda(&self) -> Result<bool> {
        Ok(self.polys().iter().map(|p| p.to_bipoly()).collect::<Result<Vec<_>>>()?.iter().any(BiPoly::depends_on_lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.grids.t.count, 200);
        assert_eq!(cfg.tolerances.mesh_tol, 1e-9);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(RunConfig::from_json(r#"{"geometry":"euclidean","colour":1}"#), Err(Error::Config(_))));
        assert!(matches!(
            RunConfig::from_json(r#"{"grids":{"t":{"min":0,"max":1,"count":5,"step":2}}}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn curve_specs_parse() {
        let cfg = RunConfig::from_json(
            r#"{"curve":{"kind":"curvature","kappa":[["1"],[],[["0","-1"],[],["1"]]]}}"#,
        )
        .unwrap();
        let Some(CurveSpec::Curvature { kappa }) = &cfg.curve else { panic!() };
        let k3 = kappa[2].to_bipoly().unwrap();
        assert_eq!(k3.eval_f64(0.5, 0.1), 0.15);
        assert!(cfg.curve.as_ref().unwrap().depends_on_lambda().unwrap());
        let bad = r#"{"curve":{"kind":"polynomial","components":[["1"],["0","1"]]}}"#;
        assert!(matches!(RunConfig::from_json(bad), Err(Error::Config(_))));
        let bad = r#"{"curve":{"kind":"curvature","kappa":[["x"],[],[]]}}"#;
        assert!(matches!(RunConfig::from_json(bad), Err(Error::Config(_))));
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(RunConfig::from_json(r#"{"grids":{"s":{"min":1,"max":1,"count":5}}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"grids":{"s":{"min":0,"max":1,"count":1}}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"geometry":"spherical","curve":{"kind":"closed-form","id":"helix"}}"#).is_err());
    }

    #[test]
    fn round_trip_through_report() {
        let cfg = RunConfig { seed: 7, ..RunConfig::default() };
        let report = serde_json::json!({ "command": "scan", "config": cfg });
        assert_eq!(RunConfig::from_json(&report.to_string()).unwrap(), cfg);
    }
}

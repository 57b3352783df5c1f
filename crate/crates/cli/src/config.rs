//! Run configuration read from TOML. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use aimx_core::aimgrid::GridConfig;
use aimx_core::kernels::GradSelfTerm;
use aimx_core::operators::Mode;
use aimx_core::quadrature::QuadratureConfig;
use aimx_core::solver::{Formulation, GmresConfig, PreconditionerKind, SweepPlan};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mesh: MeshSection,
    pub frequencies: FrequencySection,
    #[serde(default)]
    pub formulation: FormulationSection,
    /// `direct`, `aim` or `aimx`.
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub gmres: GmresSection,
    /// `none`, `diag_static` or `diag_fullwave`.
    #[serde(default = "default_preconditioner")]
    pub preconditioner: String,
    /// Treat the linear kernel term directly on overlapping pairs (aimx only).
    #[serde(default)]
    pub linear_term: bool,
    /// Value of the gradient kernel at zero distance on the grid: `scalar` or `zero`.
    #[serde(default = "default_grad_self")]
    pub grad_self_term: String,
    #[serde(default)]
    pub excitation: ExcitationSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

fn default_mode() -> String {
    "aimx".into()
}

fn default_preconditioner() -> String {
    "diag_static".into()
}

fn default_grad_self() -> String {
    "scalar".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    /// Relative paths are taken from the directory of the config file.
    pub path: PathBuf,
    #[serde(default = "one")]
    pub scale: f64,
    /// `tri` or `msh`; inferred from the extension when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

fn one() -> f64 {
    1.0
}

/// Either an explicit `list` or `start`, `stop` and `count` (inclusive, linear).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl FrequencySection {
    pub fn values(&self) -> Result<Vec<f64>, ConfigError> {
        match (&self.list, self.start, self.stop, self.count) {
            (Some(l), None, None, None) => Ok(l.clone()),
            (None, Some(a), Some(b), Some(n)) => {
                if n == 0 {
                    return invalid("frequencies.count must be at least 1");
                }
                if n == 1 {
                    return if a == b { Ok(vec![a]) } else { invalid("count = 1 needs start = stop") };
                }
                Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
            }
            _ => invalid("frequencies needs either `list` or all of `start`, `stop`, `count`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulationSection {
    /// `efie` or `cfie`.
    #[serde(default = "default_formulation")]
    pub kind: String,
    /// CFIE weight of the EFIE part.
    #[serde(default = "half")]
    pub alpha: f64,
}

fn default_formulation() -> String {
    "efie".into()
}

fn half() -> f64 {
    0.5
}

impl Default for FormulationSection {
    fn default() -> Self {
        Self {
            kind: default_formulation(),
            alpha: half(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub points_per_wavelength: f64,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_radius_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin_cells: Option<f64>,
    pub max_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = GridConfig::default();
        Self {
            points_per_wavelength: g.points_per_wavelength,
            order: g.order,
            near_radius_cells: g.near_radius_cells,
            margin_cells: g.margin_cells,
            max_points: g.max_points,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    pub far_degree: usize,
    pub near_degree: usize,
    pub near_outer_levels: usize,
    pub graded_points: usize,
    pub near_factor: f64,
    pub max_dense_unknowns: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            far_degree: q.far_degree,
            near_degree: q.near_degree,
            near_outer_levels: q.near_outer_levels,
            graded_points: q.graded_points,
            near_factor: q.near_factor,
            max_dense_unknowns: q.max_dense_unknowns,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GmresSection {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresSection {
    fn default() -> Self {
        let g = GmresConfig::default();
        Self {
            tol: g.tol,
            restart: g.restart,
            max_iter: g.max_iter,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    /// Propagation direction of the incident wave.
    pub direction: [f64; 3],
    /// Unit electric-field direction, orthogonal to `direction`.
    pub polarization: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationSection {
    #[serde(default = "default_direction")]
    pub direction: [f64; 3],
    #[serde(default = "default_polarization")]
    pub polarization: [f64; 3],
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Further incidences solved with the same operators; each gets its own
    /// monostatic rows.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<Incidence>,
}

fn default_direction() -> [f64; 3] {
    [0.0, 0.0, -1.0]
}

fn default_polarization() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

impl Default for ExcitationSection {
    fn default() -> Self {
        Self {
            direction: default_direction(),
            polarization: default_polarization(),
            amplitude: 1.0,
            sweep: Vec::new(),
        }
    }
}

impl ExcitationSection {
    pub fn incidences(&self) -> Vec<Incidence> {
        let mut out = vec![Incidence {
            direction: self.direction,
            polarization: self.polarization,
        }];
        out.extend(self.sweep.iter().cloned());
        out
    }
}

/// Bistatic cut at fixed azimuth over a polar-angle range (degrees, inclusive).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSection {
    pub phi_deg: f64,
    #[serde(default)]
    pub theta_start_deg: f64,
    #[serde(default = "half_turn")]
    pub theta_stop_deg: f64,
    #[serde(default = "default_cut_count")]
    pub count: usize,
}

fn half_turn() -> f64 {
    180.0
}

fn default_cut_count() -> usize {
    181
}

impl CutSection {
    pub fn thetas(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.theta_start_deg];
        }
        (0..self.count)
            .map(|i| self.theta_start_deg + (self.theta_stop_deg - self.theta_start_deg) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out")]
    pub dir: PathBuf,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bistatic: Vec<CutSection>,
    /// Adds Mie-series columns for a PEC sphere of this radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mie_radius: Option<f64>,
    /// Writes the solved basis coefficients per frequency.
    #[serde(default)]
    pub currents: bool,
}

fn default_out() -> PathBuf {
    PathBuf::from("aimx-out")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_out(),
            bistatic: Vec::new(),
            mie_radius: None,
            currents: false,
        }
    }
}

/// Configuration with relative paths resolved and every value checked.
pub struct Resolved {
    pub config: RunConfig,
    pub plan: SweepPlan,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg: RunConfig = toml::from_str(&text)?;
        if cfg.mesh.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.mesh.path = dir.join(&cfg.mesh.path);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        let d = Sha256::digest(self.to_toml().as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn resolve(self) -> Result<Resolved, ConfigError> {
        let frequencies = self.frequencies.values()?;
        let mode: Mode = self.mode.parse().map_err(ConfigError::Invalid)?;
        let formulation = match self.formulation.kind.to_ascii_lowercase().as_str() {
            "efie" => Formulation::Efie,
            "cfie" => Formulation::Cfie {
                alpha: self.formulation.alpha,
            },
            other => return invalid(format!("unknown formulation '{other}' (expected efie or cfie)")),
        };
        let preconditioner: PreconditionerKind = self.preconditioner.parse().map_err(ConfigError::Invalid)?;
        let grad_self = match self.grad_self_term.to_ascii_lowercase().as_str() {
            "scalar" => GradSelfTerm::Scalar,
            "zero" => GradSelfTerm::Zero,
            other => return invalid(format!("unknown grad_self_term '{other}' (expected scalar or zero)")),
        };
        if !(self.mesh.scale > 0.0) {
            return invalid("mesh.scale must be positive");
        }
        if !(self.excitation.amplitude > 0.0) {
            return invalid("excitation.amplitude must be positive");
        }
        if let Some(r) = self.output.mie_radius {
            if !(r > 0.0) {
                return invalid("output.mie_radius must be positive");
            }
        }
        for c in &self.output.bistatic {
            if c.count == 0 {
                return invalid("bistatic cut count must be at least 1");
            }
        }
        let g = &self.grid;
        if !(g.points_per_wavelength > 0.0) || g.order == 0 {
            return invalid("grid.points_per_wavelength must be positive and grid.order at least 1");
        }
        let gm = &self.gmres;
        if !(gm.tol > 0.0) || gm.restart == 0 || gm.max_iter == 0 {
            return invalid("gmres.tol must be positive and restart, max_iter at least 1");
        }
        let q = &self.quadrature;
        let mut plan = SweepPlan::new(frequencies, formulation, mode);
        plan.preconditioner = preconditioner;
        plan.gmres = GmresConfig {
            tol: gm.tol,
            restart: gm.restart,
            max_iter: gm.max_iter,
        };
        plan.linear_term = self.linear_term;
        plan.grid = GridConfig {
            points_per_wavelength: g.points_per_wavelength,
            order: g.order,
            near_radius_cells: g.near_radius_cells,
            margin_cells: g.margin_cells,
            max_points: g.max_points,
        };
        plan.quadrature = QuadratureConfig {
            far_degree: q.far_degree,
            near_degree: q.near_degree,
            near_outer_levels: q.near_outer_levels,
            graded_points: q.graded_points,
            near_factor: q.near_factor,
            max_dense_unknowns: q.max_dense_unknowns,
        };
        plan.grad_self = grad_self;
        plan.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(Resolved { config: self, plan })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, toml::de::Error> {
        toml::from_str(s)
    }

    const MIN: &str = "[mesh]\npath = \"m.tri\"\n[frequencies]\nlist = [1e8, 2e8]\n";

    #[test]
    fn defaults_fill_everything() {
        let c = parse(MIN).unwrap();
        assert_eq!(c.mode, "aimx");
        assert_eq!(c.grid, GridSection::default());
        let r = c.resolve().unwrap();
        assert_eq!(r.plan.frequencies, vec![1e8, 2e8]);
        assert_eq!(r.plan.preconditioner, PreconditionerKind::DiagStatic);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let c = parse(&format!("{MIN}[grid]\npoints_per_wavelength = 16.0\n[gmres]\ntol = 1e-6\n")).unwrap();
        assert_eq!(c.grid.points_per_wavelength, 16.0);
        assert_eq!(c.grid.order, GridSection::default().order);
        assert_eq!(c.gmres.restart, GmresSection::default().restart);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse(&format!("{MIN}bogus = 1\n")).is_err());
        assert!(parse(&format!("{MIN}[grid]\nppw = 10\n")).is_err());
    }

    #[test]
    fn frequency_forms() {
        let f = FrequencySection {
            start: Some(1.0),
            stop: Some(3.0),
            count: Some(3),
            ..Default::default()
        };
        assert_eq!(f.values().unwrap(), vec![1.0, 2.0, 3.0]);
        let both = FrequencySection {
            list: Some(vec![1.0]),
            start: Some(1.0),
            ..Default::default()
        };
        assert!(both.values().is_err());
        assert!(FrequencySection::default().values().is_err());
    }

    #[test]
    fn bad_values_are_reported() {
        for extra in [
            "mode = \"fast\"\n",
            "preconditioner = \"ilu\"\n",
            "grad_self_term = \"half\"\n",
            "linear_term = true\nmode = \"aim\"\n",
            "[formulation]\nkind = \"mfie\"\n",
            "[gmres]\ntol = 0.0\n",
        ] {
            let c = parse(&format!("{extra}\n{MIN}")).unwrap();
            assert!(c.resolve().is_err(), "{extra}");
        }
    }

    #[test]
    fn toml_round_trip_preserves_config() {
        let c = parse(&format!("{MIN}[[output.bistatic]]\nphi_deg = 0.0\n")).unwrap();
        let back: RunConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }
}

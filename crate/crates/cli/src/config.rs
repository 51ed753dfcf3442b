//! Experiment configuration: a TOML document per run, schema-checked with
//! field-level diagnostics. The `command` key must match the subcommand so a
//! config file is a self-describing, versionable artifact.

use serde::Deserialize;

use pointscat::geom::Dim;
use pointscat::multipoint::{MultipointPotential, PointScatterer};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Must equal the CLI subcommand this config is passed to.
    pub command: String,
    #[serde(default)]
    pub output: OutputSection,
    pub potential: Option<PotentialSection>,
    pub scattering: Option<ScatteringSection>,
    pub soliton: Option<SolitonSection>,
    pub delta_limit: Option<DeltaLimitSection>,
    pub ite: Option<IteSection>,
    pub box_bound: Option<BoxBoundSection>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// File name stem for the CSV and manifest; defaults to the command name.
    pub prefix: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub dimension: usize,
    pub positions: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringSection {
    pub energy: Option<f64>,
    pub energies: Option<Vec<f64>>,
    /// Sphere-quadrature node count; defaults per dimension (2 / 64 / 128).
    pub quadrature: Option<usize>,
    /// Incidence direction for `amplitude` (normalized internally).
    pub incident: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonSection {
    pub kappas: Vec<f64>,
    pub normings: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaLimitSection {
    pub alpha: f64,
    pub widths: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IteSection {
    pub energy_re: f64,
    #[serde(default)]
    pub energy_im: f64,
    /// Direction counts M to sweep; each must exceed the scatterer count.
    pub directions: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxBoundSection {
    pub energy: u64,
    /// Explicit placements, each a point in (0, pi)^2.
    pub points: Option<Vec<Vec<f64>>>,
    /// Alternatively: seeded random placements.
    pub random_trials: Option<usize>,
    pub points_per_trial: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rank_rel: f64,
    pub kernel_residual: f64,
    pub unitarity: f64,
    pub boundary: f64,
    pub transparency: f64,
    pub ite_point: f64,
    pub ite_helmholtz: f64,
    pub delta_ratio_low: f64,
    pub delta_ratio_high: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel: 1e-8,
            kernel_residual: 1e-10,
            unitarity: 1e-8,
            boundary: 1e-10,
            transparency: 1e-12,
            ite_point: 1e-12,
            ite_helmholtz: 1e-4,
            delta_ratio_low: 0.4,
            delta_ratio_high: 0.62,
        }
    }
}

impl ConfigFile {
    pub fn parse(raw: &str) -> Result<Self, ConfigError> {
        toml::from_str(raw).map_err(|e| err(format!("config: {e}")))
    }

    pub fn require_potential(&self) -> Result<MultipointPotential, ConfigError> {
        let section = self
            .potential
            .as_ref()
            .ok_or_else(|| err(format!("command `{}` requires a [potential] section", self.command)))?;
        let d = Dim::from_usize(section.dimension)
            .map_err(|e| err(format!("[potential].dimension: {e}")))?;
        if section.positions.len() != section.alphas.len() {
            return Err(err(format!(
                "[potential]: {} positions but {} alphas",
                section.positions.len(),
                section.alphas.len()
            )));
        }
        if section.positions.is_empty() {
            return Err(err("[potential].positions must be non-empty".to_string()));
        }
        let mut scatterers = Vec::with_capacity(section.positions.len());
        for (j, (pos, &alpha)) in section.positions.iter().zip(&section.alphas).enumerate() {
            scatterers.push(
                PointScatterer::new(pos.clone(), alpha)
                    .map_err(|e| err(format!("[potential].positions[{j}]: {e}")))?,
            );
        }
        MultipointPotential::new(d, scatterers).map_err(|e| err(format!("[potential]: {e}")))
    }

    /// The energy list for scattering commands: `energy` or `energies`,
    /// exactly one of them, all entries positive.
    pub fn require_energies(&self) -> Result<Vec<f64>, ConfigError> {
        let section = self.scattering.as_ref().ok_or_else(|| {
            err(format!("command `{}` requires a [scattering] section", self.command))
        })?;
        let energies = match (&section.energy, &section.energies) {
            (Some(e), None) => vec![*e],
            (None, Some(list)) if !list.is_empty() => list.clone(),
            (None, Some(_)) => return Err(err("[scattering].energies must be non-empty")),
            (Some(_), Some(_)) => {
                return Err(err("[scattering]: give `energy` or `energies`, not both"))
            }
            (None, None) => {
                return Err(err("[scattering]: missing field `energy` (or `energies`)"))
            }
        };
        for &e in &energies {
            if !(e > 0.0) {
                return Err(err(format!(
                    "[scattering].energies: entries must be > 0, got {e}"
                )));
            }
        }
        Ok(energies)
    }

    pub fn quadrature_size(&self, d: Dim) -> usize {
        self.scattering
            .as_ref()
            .and_then(|s| s.quadrature)
            .unwrap_or(match d {
                Dim::One => 2,
                Dim::Two => 64,
                Dim::Three => 128,
            })
    }

    pub fn incident_direction(&self, d: Dim) -> Result<Vec<f64>, ConfigError> {
        let raw = self
            .scattering
            .as_ref()
            .and_then(|s| s.incident.clone())
            .unwrap_or_else(|| {
                let mut e1 = vec![0.0; d.ambient()];
                e1[0] = 1.0;
                e1
            });
        if raw.len() != d.ambient() {
            return Err(err(format!(
                "[scattering].incident has {} components, dimension is {}",
                raw.len(),
                d.ambient()
            )));
        }
        let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(err("[scattering].incident must be a nonzero vector"));
        }
        Ok(raw.into_iter().map(|c| c / norm).collect())
    }
}

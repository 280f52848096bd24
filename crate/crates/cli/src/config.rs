use std::path::{Path, PathBuf};

use pn_core::dynamics::Integrator;
use pn_core::perturb::{Distribution, Recipe};
use pn_core::PhysParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Frenkel,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    Tanh,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpShape {
    /// a exp(-x^2 / w^2)
    Gaussian,
    /// a (x / w) exp(-x^2 / w^2)
    Odd,
}

/// Flat run configuration. Lengths ending in `_over_zeta` are in units of zeta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub format_version: String,
    #[serde(rename = "G")]
    pub g: f64,
    pub nu: f64,
    pub b: f64,
    pub d: f64,
    /// Derived d / (2(1 - nu)); accepted only when consistent.
    pub zeta: Option<f64>,
    #[serde(rename = "L_over_zeta")]
    pub l_over_zeta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub potential: PotentialKind,
    pub potential_table: String,
    pub output: String,

    /// Input profile CSV (x,u1,...) for extend and energy; empty means solve first.
    pub profile: String,
    pub init: InitKind,
    pub max_iters: usize,
    pub newton: bool,

    pub y_min_over_zeta: f64,
    pub y_max_over_zeta: f64,
    pub y_count: usize,
    pub x_max_over_zeta: f64,

    pub box_radii_over_zeta: Vec<f64>,
    pub pert_distribution: Distribution,
    pub pert_seed: u64,
    pub pert_count: usize,
    pub pert_amp_min: f64,
    pub pert_amp_max: f64,
    pub pert_width_min: f64,
    pub pert_width_max: f64,
    pub pert_center_max: f64,

    pub dt: f64,
    pub t_end: f64,
    pub adapt: bool,
    pub integrator: Integrator,
    pub energy_tol: f64,
    pub max_halvings: usize,
    pub bump_shape: BumpShape,
    pub bump_amplitude: f64,
    pub bump_width_over_zeta: f64,
    pub snapshot_times: Vec<f64>,

    pub validate_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let r = Recipe::in_range(2024, 10);
        Self {
            format_version: FORMAT_VERSION.into(),
            g: 1.0,
            nu: 0.25,
            b: 1.0,
            d: 1.0,
            zeta: None,
            l_over_zeta: 200.0,
            n: 4096,
            potential: PotentialKind::Frenkel,
            potential_table: String::new(),
            output: "pn-out".into(),
            profile: String::new(),
            init: InitKind::Tanh,
            max_iters: 20000,
            newton: true,
            y_min_over_zeta: 0.1,
            y_max_over_zeta: 10.0,
            y_count: 25,
            x_max_over_zeta: 10.0,
            box_radii_over_zeta: vec![5.0, 10.0, 20.0, 40.0],
            pert_distribution: r.distribution,
            pert_seed: r.seed,
            pert_count: r.count,
            pert_amp_min: r.amp_min,
            pert_amp_max: r.amp_max,
            pert_width_min: r.width_min,
            pert_width_max: r.width_max,
            pert_center_max: r.center_max,
            dt: 0.1,
            t_end: 50.0,
            adapt: true,
            integrator: Integrator::SemiImplicit,
            energy_tol: 1e-10,
            max_halvings: 20,
            bump_shape: BumpShape::Gaussian,
            bump_amplitude: 0.1,
            bump_width_over_zeta: 1.0,
            snapshot_times: vec![],
            validate_seed: 2024,
        }
    }
}

fn bad(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        key: key.into(),
        reason: reason.into(),
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<PhysParams, CliError> {
        PhysParams::new(self.g, self.nu, self.b, self.d).map_err(|e| match e {
            pn_core::PnError::InvalidParameter { name, reason } => bad(name, reason),
            e => bad("params", e.to_string()),
        })
    }

    pub fn recipe(&self) -> Recipe {
        Recipe {
            distribution: self.pert_distribution,
            seed: self.pert_seed,
            count: self.pert_count,
            amp_min: self.pert_amp_min,
            amp_max: self.pert_amp_max,
            width_min: self.pert_width_min,
            width_max: self.pert_width_max,
            center_max: self.pert_center_max,
        }
    }

    /// Checks ranges and fills the derived zeta.
    pub fn validate(mut self) -> Result<Self, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(bad("format_version", format!("unsupported version {:?}", self.format_version)));
        }
        let p = self.params()?;
        if let Some(z) = self.zeta {
            if (z - p.zeta()).abs() > 1e-12 * p.zeta() {
                return Err(bad("zeta", format!("{z} disagrees with d/(2(1-nu)) = {}", p.zeta())));
            }
        }
        self.zeta = Some(p.zeta());
        if !(self.l_over_zeta > 0.0 && self.l_over_zeta.is_finite()) {
            return Err(bad("L_over_zeta", "must be positive"));
        }
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return Err(bad("N", "must be even and at least 4"));
        }
        if self.potential == PotentialKind::Table && self.potential_table.is_empty() {
            return Err(bad("potential_table", "required when potential = \"table\""));
        }
        if self.output.is_empty() {
            return Err(bad("output", "must not be empty"));
        }
        if !(self.y_min_over_zeta > 0.0 && self.y_max_over_zeta > self.y_min_over_zeta) {
            return Err(bad("y_min_over_zeta", "need 0 < y_min_over_zeta < y_max_over_zeta"));
        }
        if self.y_count < 2 {
            return Err(bad("y_count", "must be at least 2"));
        }
        if !(self.x_max_over_zeta > 0.0) {
            return Err(bad("x_max_over_zeta", "must be positive"));
        }
        if self.box_radii_over_zeta.iter().any(|r| !(*r > 0.0)) {
            return Err(bad("box_radii_over_zeta", "radii must be positive"));
        }
        if !(self.dt > 0.0) {
            return Err(bad("dt", "must be positive"));
        }
        if !(self.t_end > 0.0) {
            return Err(bad("t_end", "must be positive"));
        }
        if !(self.energy_tol >= 0.0) {
            return Err(bad("energy_tol", "must be nonnegative"));
        }
        if !(self.bump_width_over_zeta > 0.0) {
            return Err(bad("bump_width_over_zeta", "must be positive"));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && **t <= self.t_end)) {
            return Err(bad("snapshot_times", format!("{t} outside [0, t_end]")));
        }
        if self.pert_amp_min > self.pert_amp_max || self.pert_amp_min < 0.0 {
            return Err(bad("pert_amp_min", "need 0 <= pert_amp_min <= pert_amp_max"));
        }
        if !(self.pert_width_min > 0.0 && self.pert_width_min <= self.pert_width_max) {
            return Err(bad("pert_width_min", "need 0 < pert_width_min <= pert_width_max"));
        }
        if !(self.pert_center_max >= 0.0) {
            return Err(bad("pert_center_max", "must be nonnegative"));
        }
        Ok(self)
    }

    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn output_dir(&self) -> PathBuf {
        PathBuf::from(&self.output)
    }

    /// Names of every accepted key.
    pub fn keys() -> Vec<String> {
        let v = toml::Table::try_from(RunConfig {
            zeta: Some(0.0),
            ..RunConfig::default()
        })
        .expect("config serializes");
        v.keys().cloned().collect()
    }
}

/// Reads a value written on the command line as TOML, falling back to a plain string.
fn parse_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Loads the file (if any), applies overrides in order, and validates.
pub fn parse_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            toml::from_str::<toml::Table>(&text).map_err(|e| bad("config", e.message().to_string()))?
        }
        None => toml::Table::new(),
    };
    let keys = RunConfig::keys();
    for (k, v) in overrides {
        if !keys.contains(k) {
            return Err(bad(k, "unknown key"));
        }
        table.insert(k.clone(), parse_value(v));
    }
    let cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| {
        let msg = e.message().to_string();
        // name the offending key when toml reports one
        let key = msg
            .split('`')
            .nth(1)
            .filter(|k| !k.is_empty())
            .unwrap_or("config")
            .to_string();
        bad(&key, msg)
    })?;
    cfg.validate()
}

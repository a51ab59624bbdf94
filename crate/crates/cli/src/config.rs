//! Run configuration: a JSON file, per-field flags, and the resolved form
//! that is echoed into every dataset.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use freqwalk_core::gates::{GateName, DEFAULT_Q_STAR};
use freqwalk_core::two_qubit::{TwoQubitGate, MS_SEQUENCE};
use freqwalk_core::Engine;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_N_K: usize = 1024;
pub const DEFAULT_DIFFUSION_HALF_WIDTH: usize = 2500;
pub const DEFAULT_DELTA: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Band,
    Evolve,
    Diffusion,
    Gate,
    Prepare,
    Cnot,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Band => "band",
            Experiment::Evolve => "evolve",
            Experiment::Diffusion => "diffusion",
            Experiment::Gate => "gate",
            Experiment::Prepare => "prepare",
            Experiment::Cnot => "cnot",
        }
    }

    /// Experiments whose output is a table rather than a report.
    pub fn is_tabular(self) -> bool {
        matches!(self, Experiment::Band | Experiment::Evolve | Experiment::Diffusion)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Direct,
    Spectral,
}

impl From<EngineChoice> for Engine {
    fn from(e: EngineChoice) -> Self {
        match e {
            EngineChoice::Direct => Engine::Direct,
            EngineChoice::Spectral => Engine::Spectral,
        }
    }
}

/// Parse an angle: a plain number, or a multiple of pi such as `0.27pi`,
/// `3pi/4`, `-pi/2`, `2*pi` or `π/3`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || format!("cannot parse angle `{text}`");
    let Some((coef, rest)) = t.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => coef.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest.trim();
    let d = match rest.strip_prefix('/') {
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
        Some(den) => den.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if d == 0.0 {
        return Err(bad());
    }
    Ok(c * PI / d)
}

/// An angle in a config file: a JSON number or an angle string.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(try_from = "AngleRepr")]
pub struct Angle(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Num(f64),
    Text(String),
}

impl TryFrom<AngleRepr> for Angle {
    type Error = String;

    fn try_from(r: AngleRepr) -> std::result::Result<Self, String> {
        match r {
            AngleRepr::Num(x) => Ok(Angle(x)),
            AngleRepr::Text(s) => parse_angle(&s).map(Angle),
        }
    }
}

/// One or more angles: a number, a comma-separated string, or an array.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "AngleListRepr")]
pub struct AngleList(pub Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleListRepr {
    Num(f64),
    Text(String),
    Many(Vec<AngleRepr>),
}

impl TryFrom<AngleListRepr> for AngleList {
    type Error = String;

    fn try_from(r: AngleListRepr) -> std::result::Result<Self, String> {
        match r {
            AngleListRepr::Num(x) => Ok(AngleList(vec![x])),
            AngleListRepr::Text(s) => AngleList::parse(&s),
            AngleListRepr::Many(v) => {
                v.into_iter().map(|a| Angle::try_from(a).map(|a| a.0)).collect::<std::result::Result<_, _>>().map(AngleList)
            }
        }
    }
}

impl AngleList {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        text.split(',').filter(|s| !s.trim().is_empty()).map(parse_angle).collect::<std::result::Result<_, _>>().map(AngleList)
    }
}

/// Register ops: a comma-separated string or an array of tags.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(from = "OpsRepr")]
pub struct OpList(pub Vec<String>);

#[derive(Deserialize)]
#[serde(untagged)]
enum OpsRepr {
    Text(String),
    Many(Vec<String>),
}

impl From<OpsRepr> for OpList {
    fn from(r: OpsRepr) -> Self {
        match r {
            OpsRepr::Text(s) => OpList::parse(&s),
            OpsRepr::Many(v) => OpList(v),
        }
    }
}

impl OpList {
    pub fn parse(text: &str) -> Self {
        OpList(text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
    }
}

/// Unvalidated settings, from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<Experiment>,
    pub gamma: Option<AngleList>,
    pub theta: Option<Angle>,
    pub phi_h: Option<Angle>,
    pub phi_v: Option<Angle>,
    pub steps: Option<usize>,
    pub half_width: Option<usize>,
    pub delta: Option<f64>,
    pub q: Option<Angle>,
    pub engine: Option<EngineChoice>,
    pub n_k: Option<usize>,
    pub gate_name: Option<String>,
    pub rz_phi: Option<Angle>,
    pub phi1: Option<Angle>,
    pub phi2: Option<Angle>,
    pub sequence: Option<OpList>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            experiment: self.experiment.or(base.experiment),
            gamma: self.gamma.or(base.gamma),
            theta: self.theta.or(base.theta),
            phi_h: self.phi_h.or(base.phi_h),
            phi_v: self.phi_v.or(base.phi_v),
            steps: self.steps.or(base.steps),
            half_width: self.half_width.or(base.half_width),
            delta: self.delta.or(base.delta),
            q: self.q.or(base.q),
            engine: self.engine.or(base.engine),
            n_k: self.n_k.or(base.n_k),
            gate_name: self.gate_name.or(base.gate_name),
            rz_phi: self.rz_phi.or(base.rz_phi),
            phi1: self.phi1.or(base.phi1),
            phi2: self.phi2.or(base.phi2),
            sequence: self.sequence.or(base.sequence),
            output_path: self.output_path.or(base.output_path),
            format: self.format.or(base.format),
        }
    }
}

/// Validated configuration. Only the fields the experiment reads are set,
/// so the serialized form doubles as a reproducible config file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rz_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<String>>,
    pub format: Format,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(raw: RawConfig) -> Result<Self> {
        let experiment = raw.experiment.ok_or_else(|| CliError::Config("missing required field `experiment`".into()))?;
        let exp = experiment.name();
        let req = |v: Option<Angle>, field: &str| v.map(|a| a.0).ok_or_else(|| CliError::missing(field, exp));
        let single_gamma = |g: Option<AngleList>, required: bool| -> Result<Vec<f64>> {
            match g {
                None if required => Err(CliError::missing("gamma", exp)),
                None => Ok(Vec::new()),
                Some(AngleList(v)) if v.len() == 1 => Ok(v),
                Some(_) => Err(CliError::Config(format!("`gamma` must be a single value for experiment `{exp}`"))),
            }
        };
        let format = match (raw.format, experiment.is_tabular()) {
            (Some(Format::Csv), false) => {
                return Err(CliError::Config(format!("experiment `{exp}` writes a JSON report; csv is not available")))
            }
            (Some(f), _) => f,
            (None, true) => Format::Csv,
            (None, false) => Format::Json,
        };
        let engine = Some(raw.engine.unwrap_or(EngineChoice::Spectral));
        let mut cfg = RunConfig {
            experiment,
            gamma: Vec::new(),
            theta: None,
            phi_h: None,
            phi_v: None,
            steps: None,
            half_width: None,
            delta: None,
            q: None,
            engine: None,
            n_k: None,
            gate_name: None,
            rz_phi: None,
            phi1: None,
            phi2: None,
            sequence: None,
            format,
            output_path: raw.output_path.clone(),
        };
        match experiment {
            Experiment::Band | Experiment::Evolve | Experiment::Diffusion => {
                cfg.gamma = match experiment {
                    Experiment::Diffusion => match raw.gamma.clone() {
                        Some(AngleList(v)) if !v.is_empty() => v,
                        _ => return Err(CliError::missing("gamma", exp)),
                    },
                    _ => single_gamma(raw.gamma.clone(), true)?,
                };
                cfg.theta = Some(req(raw.theta, "theta")?);
                cfg.phi_h = Some(req(raw.phi_h, "phi_h")?);
                cfg.phi_v = Some(req(raw.phi_v, "phi_v")?);
            }
            _ => {}
        }
        match experiment {
            Experiment::Band => {
                cfg.n_k = Some(raw.n_k.unwrap_or(DEFAULT_N_K));
            }
            Experiment::Evolve => {
                cfg.steps = Some(raw.steps.ok_or_else(|| CliError::missing("steps", exp))?);
                cfg.half_width = Some(raw.half_width.ok_or_else(|| CliError::missing("half_width", exp))?);
                cfg.engine = engine;
                if let Some(d) = raw.delta {
                    cfg.delta = Some(d);
                    cfg.q = Some(req(raw.q, "q")?);
                }
            }
            Experiment::Diffusion => {
                cfg.steps = Some(raw.steps.ok_or_else(|| CliError::missing("steps", exp))?);
                cfg.half_width = Some(raw.half_width.unwrap_or(DEFAULT_DIFFUSION_HALF_WIDTH));
                cfg.engine = engine;
            }
            Experiment::Gate => {
                let name = raw.gate_name.ok_or_else(|| CliError::missing("gate_name", exp))?;
                let name = name.trim().to_ascii_lowercase();
                if name == "rz" {
                    cfg.rz_phi = Some(req(raw.rz_phi, "rz_phi")?);
                }
                GateName::parse(&name, cfg.rz_phi)?;
                cfg.gate_name = Some(name);
                cfg.gamma = single_gamma(raw.gamma, false)?;
                cfg.delta = Some(raw.delta.unwrap_or(DEFAULT_DELTA));
                cfg.q = Some(raw.q.map_or(DEFAULT_Q_STAR, |a| a.0));
                cfg.engine = engine;
            }
            Experiment::Prepare => {
                cfg.phi1 = Some(req(raw.phi1, "phi1")?);
                cfg.phi2 = Some(req(raw.phi2, "phi2")?);
                cfg.delta = Some(raw.delta.unwrap_or(DEFAULT_DELTA));
                cfg.q = Some(raw.q.map_or(DEFAULT_Q_STAR, |a| a.0));
                cfg.engine = engine;
            }
            Experiment::Cnot => {
                let ops = match raw.sequence {
                    Some(OpList(v)) => v
                        .iter()
                        .map(|t| TwoQubitGate::parse(t).map(|g| g.label().to_string()))
                        .collect::<std::result::Result<Vec<_>, _>>()?,
                    None => MS_SEQUENCE.iter().map(|g| g.label().to_string()).collect(),
                };
                cfg.sequence = Some(ops);
                cfg.delta = Some(raw.delta.unwrap_or(DEFAULT_DELTA));
                cfg.q = Some(raw.q.map_or(DEFAULT_Q_STAR, |a| a.0));
                cfg.engine = engine;
            }
        }
        Ok(cfg)
    }

    /// Single-line JSON echo.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

//! Run configuration in a small INI-style format.
//!
//! Sections are [mirror], [beam], [sweep], [roughness] and [output]; each
//! holds key=value lines.  Key=value pairs may also trail the section
//! header on the same line.  Full-line comments start with '#' or ';'.
//! Unknown sections or keys are rejected with the offending line number, as
//! are malformed or out-of-range values.
//!
//! Keys and units:
//!   [mirror]    R_cm, L_cm, U0_neV, material
//!   [beam]      v_mps, band_um, n_states
//!   [sweep]     v_min_mps, v_max_mps, points, v_ref_mps, U0_list_neV
//!   [roughness] br_nm, lr_um, Ef_neV
//!   [output]    path

use std::fmt;
use std::path::PathBuf;

use centrifugal_core::{
    MeanFinalEnergy, MirrorSpec, PhysicalConstants, PopulationModel, RoughnessSpec,
};

/// A configuration problem, tagged with the 1-based line it came from when
/// one applies (missing-key errors have no line).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

fn missing(section: &str, key: &str) -> ConfigError {
    ConfigError {
        line: None,
        message: format!("missing key {key} in [{section}]"),
    }
}

/// Parsed configuration; every field optional until a subcommand asks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub r_cm: Option<f64>,
    pub l_cm: Option<f64>,
    pub u0_nev: Option<f64>,
    pub material: Option<String>,

    pub v_mps: Option<f64>,
    pub band_um: Option<f64>,
    pub n_states: Option<usize>,

    pub v_min_mps: Option<f64>,
    pub v_max_mps: Option<f64>,
    pub points: Option<usize>,
    pub v_ref_mps: Option<f64>,
    pub u0_list_nev: Option<Vec<f64>>,

    pub br_nm: Option<f64>,
    pub lr_um: Option<f64>,
    pub ef_nev: Option<f64>,

    pub path: Option<PathBuf>,
}

fn parse_positive(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    let x: f64 = value
        .parse()
        .map_err(|_| at(line, format!("{key}: not a number: {value:?}")))?;
    if !x.is_finite() || x <= 0.0 {
        return Err(at(line, format!("{key}: must be finite and > 0, got {value}")));
    }
    Ok(x)
}

fn parse_nonnegative(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    let x: f64 = value
        .parse()
        .map_err(|_| at(line, format!("{key}: not a number: {value:?}")))?;
    if !x.is_finite() || x < 0.0 {
        return Err(at(line, format!("{key}: must be finite and >= 0, got {value}")));
    }
    Ok(x)
}

fn parse_count(key: &str, value: &str, line: usize) -> Result<usize, ConfigError> {
    let n: usize = value
        .parse()
        .map_err(|_| at(line, format!("{key}: not a positive integer: {value:?}")))?;
    if n == 0 {
        return Err(at(line, format!("{key}: must be at least 1")));
    }
    Ok(n)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section: Option<String> = None;
        let mut seen: Vec<(String, String)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            // pairs: inline tokens after a section header split on
            // whitespace; a plain line is one key=value with optional
            // spaces around '='
            let mut pairs: Vec<(&str, &str)> = Vec::new();
            if let Some(stripped) = line.strip_prefix('[') {
                let Some(close) = stripped.find(']') else {
                    return Err(at(lineno, "unclosed section header"));
                };
                let name = stripped[..close].trim().to_string();
                match name.as_str() {
                    "mirror" | "beam" | "sweep" | "roughness" | "output" => {}
                    other => return Err(at(lineno, format!("unknown section [{other}]"))),
                }
                section = Some(name);
                for token in stripped[close + 1..].split_whitespace() {
                    let Some((key, value)) = token.split_once('=') else {
                        return Err(at(lineno, format!("expected key=value, got {token:?}")));
                    };
                    pairs.push((key, value));
                }
            } else {
                let Some((key, value)) = line.split_once('=') else {
                    return Err(at(lineno, format!("expected key=value, got {line:?}")));
                };
                pairs.push((key, value));
            }
            if pairs.is_empty() {
                continue;
            }
            let Some(section_name) = section.clone() else {
                return Err(at(lineno, "key=value before any [section] header"));
            };
            for (key, value) in pairs {
                let (key, value) = (key.trim(), value.trim());
                if key.is_empty() || value.is_empty() {
                    return Err(at(lineno, format!("malformed pair {key:?}={value:?}")));
                }
                let full = (section_name.clone(), key.to_string());
                if seen.contains(&full) {
                    return Err(at(lineno, format!("duplicate key {key} in [{section_name}]")));
                }
                seen.push(full);
                cfg.assign(&section_name, key, value, lineno)?;
            }
        }
        Ok(cfg)
    }

    fn assign(
        &mut self,
        section: &str,
        key: &str,
        value: &str,
        line: usize,
    ) -> Result<(), ConfigError> {
        match (section, key) {
            ("mirror", "R_cm") => self.r_cm = Some(parse_positive(key, value, line)?),
            ("mirror", "L_cm") => self.l_cm = Some(parse_positive(key, value, line)?),
            ("mirror", "U0_neV") => self.u0_nev = Some(parse_positive(key, value, line)?),
            ("mirror", "material") => self.material = Some(value.to_string()),

            ("beam", "v_mps") => self.v_mps = Some(parse_positive(key, value, line)?),
            ("beam", "band_um") => self.band_um = Some(parse_positive(key, value, line)?),
            ("beam", "n_states") => self.n_states = Some(parse_count(key, value, line)?),

            ("sweep", "v_min_mps") => self.v_min_mps = Some(parse_positive(key, value, line)?),
            ("sweep", "v_max_mps") => self.v_max_mps = Some(parse_positive(key, value, line)?),
            ("sweep", "points") => self.points = Some(parse_count(key, value, line)?),
            ("sweep", "v_ref_mps") => self.v_ref_mps = Some(parse_positive(key, value, line)?),
            ("sweep", "U0_list_neV") => {
                let mut list = Vec::new();
                for part in value.split(',') {
                    list.push(parse_positive(key, part.trim(), line)?);
                }
                if list.len() < 3 {
                    return Err(at(line, format!("{key}: need at least 3 values")));
                }
                self.u0_list_nev = Some(list);
            }

            ("roughness", "br_nm") => self.br_nm = Some(parse_nonnegative(key, value, line)?),
            ("roughness", "lr_um") => self.lr_um = Some(parse_positive(key, value, line)?),
            ("roughness", "Ef_neV") => self.ef_nev = Some(parse_positive(key, value, line)?),

            ("output", "path") => self.path = Some(PathBuf::from(value)),

            _ => {
                return Err(at(line, format!("unknown key {key} in [{section}]")));
            }
        }
        Ok(())
    }

    /// The mirror description; requires R_cm, L_cm and U0_neV.
    pub fn mirror(&self) -> Result<MirrorSpec, ConfigError> {
        let r = self.r_cm.ok_or_else(|| missing("mirror", "R_cm"))?;
        let l = self.l_cm.ok_or_else(|| missing("mirror", "L_cm"))?;
        let u0 = self.u0_nev.ok_or_else(|| missing("mirror", "U0_neV"))?;
        let material = self.material.clone().unwrap_or_else(|| "custom".into());
        MirrorSpec::new(r * 1e-2, l * 1e-2, u0, &material).map_err(|e| ConfigError {
            line: None,
            message: e.to_string(),
        })
    }

    pub fn velocity(&self) -> Result<f64, ConfigError> {
        self.v_mps.ok_or_else(|| missing("beam", "v_mps"))
    }

    /// Population model: a band height selects entrance-overlap weighting.
    pub fn population(&self) -> PopulationModel {
        match self.band_um {
            Some(h) => PopulationModel::Overlap {
                band_height: h * 1e-6,
            },
            None => PopulationModel::Equal,
        }
    }

    pub fn sweep_range(&self) -> Result<(f64, f64, usize, f64), ConfigError> {
        let lo = self.v_min_mps.ok_or_else(|| missing("sweep", "v_min_mps"))?;
        let hi = self.v_max_mps.ok_or_else(|| missing("sweep", "v_max_mps"))?;
        if hi <= lo {
            return Err(ConfigError {
                line: None,
                message: format!("v_max_mps must exceed v_min_mps, got {lo} and {hi}"),
            });
        }
        let points = self.points.unwrap_or(121);
        if points < 2 {
            return Err(ConfigError {
                line: None,
                message: "points: need at least 2".into(),
            });
        }
        let v_ref = self.v_ref_mps.unwrap_or(0.5 * (lo + hi));
        if !(lo..=hi).contains(&v_ref) {
            return Err(ConfigError {
                line: None,
                message: format!("v_ref_mps {v_ref} outside sweep range [{lo}, {hi}]"),
            });
        }
        Ok((lo, hi, points, v_ref))
    }

    pub fn roughness(&self, consts: &PhysicalConstants) -> Result<RoughnessSpec, ConfigError> {
        let br = self.br_nm.ok_or_else(|| missing("roughness", "br_nm"))?;
        let lr = self.lr_um.ok_or_else(|| missing("roughness", "lr_um"))?;
        let ef = match self.ef_nev {
            Some(e) => MeanFinalEnergy::Fixed(consts.nev(e)),
            None => MeanFinalEnergy::Auto,
        };
        RoughnessSpec::new(br * 1e-9, lr * 1e-6, ef).map_err(|e| ConfigError {
            line: None,
            message: e.to_string(),
        })
    }
}

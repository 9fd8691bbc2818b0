//! Model construction from textual parameters and `key=value` config files.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use fading_emi_core::{EtaMuFormat, FadingModel};

use crate::{Error, Result};

/// Fading family names accepted on the command line and in CSV files.
pub const FAMILIES: [&str; 6] = [
    "awgn", "rayleigh", "nakagami", "rician", "eta-mu", "kappa-mu",
];

/// Textual model description: a family plus whichever shape parameters it
/// needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParams {
    pub family: String,
    pub m: Option<f64>,
    pub k: Option<f64>,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub kappa: Option<f64>,
    pub format: Option<u8>,
}

fn need(value: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Usage(format!("--{flag} is required for --model {family}")))
}

impl ModelParams {
    /// Builds and validates the model at the given mean SNR (linear).
    pub fn build(&self, snr_bar: f64) -> Result<FadingModel> {
        let family = self.family.as_str();
        let model = match family {
            "awgn" => FadingModel::Awgn { snr_bar },
            "rayleigh" => FadingModel::Rayleigh { snr_bar },
            "nakagami" => FadingModel::Nakagami {
                m: need(self.m, "m", family)?,
                snr_bar,
            },
            "rician" => FadingModel::Rician {
                k: need(self.k, "k", family)?,
                snr_bar,
            },
            "eta-mu" => FadingModel::EtaMu {
                format: match self.format.unwrap_or(1) {
                    1 => EtaMuFormat::Format1,
                    2 => EtaMuFormat::Format2,
                    other => {
                        return Err(Error::Usage(format!(
                            "--format must be 1 or 2 (got {other})"
                        )))
                    }
                },
                eta: need(self.eta, "eta", family)?,
                mu: need(self.mu, "mu", family)?,
                snr_bar,
            },
            "kappa-mu" => FadingModel::KappaMu {
                kappa: need(self.kappa, "kappa", family)?,
                mu: need(self.mu, "mu", family)?,
                snr_bar,
            },
            other => {
                return Err(Error::Usage(format!(
                    "unknown model '{other}' (expected one of {})",
                    FAMILIES.join(", ")
                )))
            }
        };
        Ok(model.validate()?)
    }

    /// Parses the `family` and `params` CSV columns, e.g. `eta-mu` and
    /// `format=2;eta=-0.5;mu=1`.
    pub fn from_columns(family: &str, params: &str) -> Result<Self> {
        let mut out = ModelParams {
            family: family.to_string(),
            ..Default::default()
        };
        for item in params.split(';').filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("malformed parameter '{item}'")))?;
            let parsed: f64 = value
                .parse()
                .map_err(|_| Error::Usage(format!("parameter {key} is not a number: '{value}'")))?;
            match key {
                "m" => out.m = Some(parsed),
                "k" => out.k = Some(parsed),
                "eta" => out.eta = Some(parsed),
                "mu" => out.mu = Some(parsed),
                "kappa" => out.kappa = Some(parsed),
                "format" => out.format = Some(parsed as u8),
                _ => return Err(Error::Usage(format!("unknown parameter '{key}'"))),
            }
        }
        Ok(out)
    }
}

/// Reads a `key=value` file. Blank lines and lines starting with `#` are
/// ignored; keys are long flag names without the leading dashes.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(Error::Usage(format!(
                "config line {}: empty key",
                lineno + 1
            )));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

/// Appends settings from the file named by `--config` to the argument list,
/// skipping any key already given as a flag, so flags take precedence.
pub fn merge_config_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let text: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut config_path = None;
    let mut given = std::collections::BTreeSet::new();
    let mut i = 0;
    while i < text.len() {
        let arg = &text[i];
        if let Some(rest) = arg.strip_prefix("--") {
            let (name, inline) = match rest.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (rest, None),
            };
            if name == "config" {
                match inline {
                    Some(v) => config_path = Some(v),
                    None => {
                        config_path = text.get(i + 1).cloned();
                        i += 1;
                    }
                }
            } else {
                given.insert(name.to_string());
            }
        }
        i += 1;
    }
    let Some(path) = config_path else {
        return Ok(args);
    };
    let mut merged: Vec<OsString> = Vec::with_capacity(args.len());
    let mut skip_next = false;
    for arg in args {
        if skip_next {
            skip_next = false;
            continue;
        }
        let s = arg.to_string_lossy();
        if s == "--config" {
            skip_next = true;
            continue;
        }
        if s.starts_with("--config=") {
            continue;
        }
        merged.push(arg);
    }
    for (key, value) in read_config(Path::new(&path))? {
        let alias_given = match key.as_str() {
            "hermite-nodes" => given.contains("inner-nodes"),
            "inner-nodes" => given.contains("hermite-nodes"),
            _ => false,
        };
        if !given.contains(&key) && !alias_given {
            merged.push(format!("--{key}").into());
            merged.push(value.into());
        }
    }
    Ok(merged)
}

//! Experiment configuration: flat key=value files, flag merging, and the
//! provenance header echoed into every output file.
//!
//! Headers are written as `# key=value` lines; stripping the `# ` prefix
//! yields a config file that reproduces the run byte for byte.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// All tunable parameters of a run. Unset fields take per-command defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub number: Option<String>,
    pub set: Option<String>,
    pub gauge: Option<String>,
    pub kernel: Option<String>,
    pub rule: Option<String>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub br_alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub qmax: Option<u64>,
    pub bits: Option<u32>,
    pub schedule: Option<String>,
    pub grid: Option<String>,
    pub coprime: Option<bool>,
}

macro_rules! set_field {
    ($cfg:expr, $key:expr, $val:expr, { $($name:literal => $field:ident : $ty:ty),+ $(,)? }) => {
        match $key {
            $(
                $name => {
                    $cfg.$field = Some($val.parse::<$ty>().map_err(|_| {
                        Error::Parse(format!(concat!("bad value for ", $name, ": {}"), $val))
                    })?);
                    return Ok(());
                }
            )+
            _ => {}
        }
    };
}

impl ExperimentConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "command" => {
                self.command = Some(value.to_string());
                return Ok(());
            }
            "number" => {
                self.number = Some(value.to_string());
                return Ok(());
            }
            "set" => {
                self.set = Some(value.to_string());
                return Ok(());
            }
            "gauge" => {
                self.gauge = Some(value.to_string());
                return Ok(());
            }
            "kernel" => {
                self.kernel = Some(value.to_string());
                return Ok(());
            }
            "rule" => {
                self.rule = Some(value.to_string());
                return Ok(());
            }
            "schedule" => {
                self.schedule = Some(value.to_string());
                return Ok(());
            }
            "grid" => {
                self.grid = Some(value.to_string());
                return Ok(());
            }
            _ => {}
        }
        set_field!(self, key, value, {
            "beta" => beta: f64,
            "gamma" => gamma: f64,
            "eps" => eps: f64,
            "delta" => delta: f64,
            "br_alpha" => br_alpha: f64,
            "sigma" => sigma: f64,
            "tol" => tol: f64,
            "depth" => depth: usize,
            "qmax" => qmax: u64,
            "bits" => bits: u32,
            "coprime" => coprime: bool,
        });
        Err(Error::Parse(format!("unknown config key: {key}")))
    }

    /// Parse `key=value` lines; `#` starts a comment, blank lines are ignored.
    pub fn from_str_config(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key=value, got {line}", lineno + 1))
            })?;
            cfg.set(key.trim(), value)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_config(&text)
    }

    /// Fill unset fields from `other` (flags override config files).
    pub fn merge_defaults(&mut self, other: &ExperimentConfig) {
        macro_rules! fill {
            ($($f:ident),+) => {
                $(if self.$f.is_none() { self.$f = other.$f.clone(); })+
            };
        }
        fill!(
            command, number, set, gauge, kernel, rule, beta, gamma, eps, delta, br_alpha,
            sigma, tol, depth, qmax, bits, schedule, grid, coprime
        );
    }

    /// Set fields as `key=value`, in fixed key order.
    pub fn echo(&self) -> Vec<String> {
        let mut map: BTreeMap<&'static str, String> = BTreeMap::new();
        macro_rules! put {
            ($name:literal, $f:ident) => {
                if let Some(v) = &self.$f {
                    map.insert($name, v.to_string());
                }
            };
        }
        put!("command", command);
        put!("number", number);
        put!("set", set);
        put!("gauge", gauge);
        put!("kernel", kernel);
        put!("rule", rule);
        put!("beta", beta);
        put!("gamma", gamma);
        put!("eps", eps);
        put!("delta", delta);
        put!("br_alpha", br_alpha);
        put!("sigma", sigma);
        put!("tol", tol);
        put!("depth", depth);
        put!("qmax", qmax);
        put!("bits", bits);
        put!("schedule", schedule);
        put!("grid", grid);
        put!("coprime", coprime);
        map.into_iter().map(|(k, v)| format!("{k}={v}")).collect()
    }

    /// Comma-separated integer list from `schedule` or `grid`.
    pub fn parse_u32_list(raw: &str) -> Result<Vec<u32>> {
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad integer in list: {s}")))
            })
            .collect()
    }

    /// Comma-separated decimal/rational list (for ε schedules).
    pub fn parse_rational_list(raw: &str) -> Result<Vec<rug::Rational>> {
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(crate::cf::parse_rational)
            .collect()
    }
}

/// Extract the config embedded in an output file header (`# key=value` lines
/// before the first non-comment line).
pub fn config_from_header(text: &str) -> Result<ExperimentConfig> {
    let mut lines = Vec::new();
    for raw in text.lines() {
        if let Some(rest) = raw.strip_prefix("# ") {
            if rest.contains('=') {
                lines.push(rest.to_string());
            }
        } else if !raw.trim().is_empty() {
            break;
        }
    }
    ExperimentConfig::from_str_config(&lines.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_echo_roundtrip() {
        let text = "# a comment\ncommand=classify\nnumber=quad:1,5,2\nbeta=1\ngamma=1.5\ndepth=60\nbits=256\n";
        let cfg = ExperimentConfig::from_str_config(text).unwrap();
        assert_eq!(cfg.command.as_deref(), Some("classify"));
        assert_eq!(cfg.gamma, Some(1.5));
        let echoed = cfg.echo().join("\n");
        let again = ExperimentConfig::from_str_config(&echoed).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(ExperimentConfig::from_str_config("wibble=3").is_err());
    }

    #[test]
    fn header_extraction() {
        let file = "# command=expand\n# number=sqrt2\n# depth=10\nn,P,Q\n0,1,1\n";
        let cfg = config_from_header(file).unwrap();
        assert_eq!(cfg.command.as_deref(), Some("expand"));
        assert_eq!(cfg.depth, Some(10));
    }

    #[test]
    fn merge_prefers_existing() {
        let mut a = ExperimentConfig {
            beta: Some(2.0),
            ..Default::default()
        };
        let b = ExperimentConfig {
            beta: Some(1.0),
            gamma: Some(3.0),
            ..Default::default()
        };
        a.merge_defaults(&b);
        assert_eq!(a.beta, Some(2.0));
        assert_eq!(a.gamma, Some(3.0));
    }
}

//! Run configuration: defaults, flat key=value config files, and the
//! CLI-flags-beat-file-beats-defaults precedence rule.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Fully resolved parameters of one command invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lambda: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub p: f64,
    pub alpha: f64,
    pub alpha_range: Option<(f64, f64)>,
    pub q_range: Option<(f64, f64)>,
    pub grid: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            gamma: 0.9,
            temperature: 0.3,
            p: 0.9,
            alpha: 0.25,
            alpha_range: None,
            q_range: None,
            grid: 200,
            seed: 0,
            out: None,
        }
    }
}

/// Optional values coming from one source (flags or a config file).
#[derive(Clone, Debug, Default)]
pub struct ConfigLayer {
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub temperature: Option<f64>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_range: Option<(f64, f64)>,
    pub q_range: Option<(f64, f64)>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults, overlaid by the config file (if any), overlaid by flags.
    pub fn resolve(file: Option<&Path>, flags: &ConfigLayer) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            cfg.apply(&parse_config_file(path)?);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, layer: &ConfigLayer) {
        if let Some(v) = layer.lambda {
            self.lambda = v;
        }
        if let Some(v) = layer.gamma {
            self.gamma = v;
        }
        if let Some(v) = layer.temperature {
            self.temperature = v;
        }
        if let Some(v) = layer.p {
            self.p = v;
        }
        if let Some(v) = layer.alpha {
            self.alpha = v;
        }
        if let Some(v) = layer.alpha_range {
            self.alpha_range = Some(v);
        }
        if let Some(v) = layer.q_range {
            self.q_range = Some(v);
        }
        if let Some(v) = layer.grid {
            self.grid = v;
        }
        if let Some(v) = layer.seed {
            self.seed = v;
        }
        if let Some(v) = &layer.out {
            self.out = Some(v.clone());
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.grid < 2 {
            return Err(CliError::Validation(format!(
                "grid must be at least 2, got {}",
                self.grid
            )));
        }
        for (name, range) in [("alpha-range", self.alpha_range), ("q-range", self.q_range)] {
            if let Some((lo, hi)) = range {
                if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                    return Err(CliError::Validation(format!(
                        "{name} must be an increasing pair, got {lo}:{hi}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Metadata echo written into CSV headers; deterministic for a fixed
    /// configuration.
    pub fn echo(&self) -> String {
        let mut parts = vec![
            format!("lambda={}", self.lambda),
            format!("gamma={}", self.gamma),
            format!("T={}", self.temperature),
            format!("p={}", self.p),
            format!("alpha={}", self.alpha),
            format!("grid={}", self.grid),
            format!("seed={}", self.seed),
        ];
        if let Some((lo, hi)) = self.alpha_range {
            parts.push(format!("alpha-range={lo}:{hi}"));
        }
        if let Some((lo, hi)) = self.q_range {
            parts.push(format!("q-range={lo}:{hi}"));
        }
        parts.join(" ")
    }
}

/// Parse `a:b` into an increasing pair.
pub fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let mut it = text.splitn(2, ':');
    let (lo, hi) = match (it.next(), it.next()) {
        (Some(a), Some(b)) => (a.trim(), b.trim()),
        _ => {
            return Err(CliError::Validation(format!(
                "range '{text}' must look like LO:HI"
            )))
        }
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| CliError::Validation(format!("bad range endpoint '{lo}'")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| CliError::Validation(format!("bad range endpoint '{hi}'")))?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(CliError::Validation(format!(
            "range '{text}' must be increasing"
        )));
    }
    Ok((lo, hi))
}

/// Flat `key=value` config file; `#` starts a comment.
fn parse_config_file(path: &Path) -> Result<ConfigLayer, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut entries: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Validation(format!(
                "config line {} is not key=value: '{raw}'",
                lineno + 1
            )));
        };
        entries.insert(key.trim().to_string(), value.trim().to_string());
    }

    let mut layer = ConfigLayer::default();
    for (key, value) in entries {
        let parse_f64 = |v: &str| -> Result<f64, CliError> {
            v.parse()
                .map_err(|_| CliError::Validation(format!("config key {key}: bad number '{v}'")))
        };
        match key.as_str() {
            "lambda" => layer.lambda = Some(parse_f64(&value)?),
            "gamma" => layer.gamma = Some(parse_f64(&value)?),
            "T" | "temperature" => layer.temperature = Some(parse_f64(&value)?),
            "p" => layer.p = Some(parse_f64(&value)?),
            "alpha" => layer.alpha = Some(parse_f64(&value)?),
            "alpha-range" => layer.alpha_range = Some(parse_range(&value)?),
            "q-range" => layer.q_range = Some(parse_range(&value)?),
            "grid" => {
                layer.grid = Some(value.parse().map_err(|_| {
                    CliError::Validation(format!("config key grid: bad integer '{value}'"))
                })?)
            }
            "seed" => {
                layer.seed = Some(value.parse().map_err(|_| {
                    CliError::Validation(format!("config key seed: bad integer '{value}'"))
                })?)
            }
            "out" => layer.out = Some(PathBuf::from(value)),
            other => {
                return Err(CliError::Validation(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
    }
    Ok(layer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_beat_file_beat_defaults() {
        let dir = std::env::temp_dir().join("qdil-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "lambda=0.25\ngrid=50\n# comment\nseed=9\n").unwrap();

        let flags = ConfigLayer {
            grid: Some(77),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&path), &flags).unwrap();
        assert_eq!(cfg.lambda, 0.25); // from file
        assert_eq!(cfg.grid, 77); // flag wins
        assert_eq!(cfg.seed, 9); // from file
        assert_eq!(cfg.gamma, 0.9); // default
    }

    #[test]
    fn bad_ranges_are_rejected() {
        assert!(parse_range("0.5:0.1").is_err());
        assert!(parse_range("x:1").is_err());
        assert!(parse_range("0.1:0.5").is_ok());
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = std::env::temp_dir().join("qdil-config-test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "bogus=1\n").unwrap();
        assert!(RunConfig::resolve(Some(&path), &ConfigLayer::default()).is_err());
    }
}

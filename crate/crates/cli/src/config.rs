//! Optional JSON configuration file; flags override its fields, its fields
//! override the built-in defaults.

use serde::Deserialize;
use std::path::Path;

/// Scalar, inline list, or sweep spec ("start:stop:count").
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Scalar(f64),
    List(Vec<f64>),
    Spec(String),
}

impl Values {
    pub fn resolve(&self) -> Result<Vec<f64>, String> {
        match self {
            Values::Scalar(v) => Ok(vec![*v]),
            Values::List(v) => {
                if v.is_empty() {
                    Err("empty value list".into())
                } else {
                    Ok(v.clone())
                }
            }
            Values::Spec(s) => parse_values(s),
        }
    }
}

/// Parses "a,b,c" as an explicit list or "start:stop:count" as a linear grid.
pub fn parse_values(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty value list".into());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("sweep spec must be start:stop:count, got `{spec}`"));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| format!("bad sweep start `{}`", parts[0]))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| format!("bad sweep stop `{}`", parts[1]))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad sweep count `{}`", parts[2]))?;
        if count == 0 {
            return Err("sweep count must be positive".into());
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        spec.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad value `{}`", p.trim()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub a: Option<Values>,
    pub r_bs: Option<Values>,
    pub length: Option<Values>,
    pub eta: Option<f64>,
    pub xi: Option<f64>,
    pub kappa: Option<f64>,
    pub velocity: Option<f64>,
    pub amp: Option<f64>,
    pub index: Option<f64>,
    pub pair: Option<String>,
    pub parity: Option<String>,
    pub per_detector: Option<bool>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out_dir: Option<String>,
    pub name: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("cannot parse config {}: {e}", path.display()))
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_and_sweep_parsing() {
        assert_eq!(parse_values("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_values("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_values("5:9:1").unwrap(), vec![5.0]);
        assert!(parse_values("").is_err());
        assert!(parse_values("1:2").is_err());
        assert!(parse_values("x").is_err());
        assert!(parse_values("0:1:0").is_err());
    }

    #[test]
    fn config_values_resolve() {
        let cfg: FileConfig =
            serde_json::from_str(r#"{"a": "0:2:5", "r_bs": [0.2, 0.5], "eta": 0.9}"#).unwrap();
        assert_eq!(cfg.a.unwrap().resolve().unwrap().len(), 5);
        assert_eq!(cfg.r_bs.unwrap().resolve().unwrap(), vec![0.2, 0.5]);
        assert_eq!(cfg.eta, Some(0.9));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).is_err());
    }
}

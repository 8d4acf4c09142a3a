//! Flat `key = value` configuration files and the defaults < file < flags
//! merge.
//!
//! ```text
//! # training
//! lr = 0.09
//! batch = 30
//! noise-kind = bit-flip
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gqhan_core::{GradientMethod, NoiseKind, NoiseSpec, TrainConfig};

use crate::error::{Error, Result};

/// Keys accepted in a config file.
pub const KNOWN_KEYS: &[&str] = &[
    "lr",
    "batch",
    "steps",
    "gamma",
    "seed",
    "noise-kind",
    "noise-p",
    "grad-method",
    "epsilon",
    "scale-pixels",
    "center-features",
];

/// Parsed `key = value` pairs. Later duplicates are rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            let (key, value) = (key.trim().replace('_', "-"), value.trim());
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", i + 1)));
            }
            if value.is_empty() {
                return Err(Error::Config(format!("line {}: empty value for {key}", i + 1)));
            }
            if entries.insert(key.clone(), value.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("config key {key} = {v:?}: {e}")))
            })
            .transpose()
    }
}

/// Command-line overrides shared by the training commands. `None` means
/// "not given".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainOverrides {
    pub lr: Option<f64>,
    pub batch: Option<usize>,
    pub steps: Option<usize>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub noise_kind: Option<NoiseKind>,
    pub noise_p: Option<f64>,
    pub grad_method: Option<GradientMethod>,
}

impl TrainOverrides {
    /// Resolves the training configuration from defaults, then `file`, then
    /// these flags.
    pub fn resolve(&self, file: Option<&ConfigFile>) -> Result<TrainConfig> {
        let empty = ConfigFile::default();
        let file = file.unwrap_or(&empty);
        let mut cfg = TrainConfig::default();
        macro_rules! layer {
            ($field:ident, $key:literal, $flag:expr) => {
                if let Some(v) = file.get($key)? {
                    cfg.$field = v;
                }
                if let Some(v) = $flag {
                    cfg.$field = v;
                }
            };
        }
        layer!(learning_rate, "lr", self.lr);
        layer!(batch_size, "batch", self.batch);
        layer!(steps, "steps", self.steps);
        layer!(momentum, "gamma", self.gamma);
        layer!(seed, "seed", self.seed);
        let method: Option<String> = file.get("grad-method")?;
        if let Some(m) = method {
            cfg.gradient_method = m.parse()?;
        }
        if let Some(m) = self.grad_method {
            cfg.gradient_method = m;
        }

        let kind: Option<NoiseKind> = match (self.noise_kind, file.get::<String>("noise-kind")?) {
            (Some(k), _) => Some(k),
            (None, Some(s)) if s == "none" => None,
            (None, Some(s)) => Some(s.parse()?),
            (None, None) => None,
        };
        let p = self.noise_p.or(file.get("noise-p")?);
        cfg.noise = match (kind, p) {
            (Some(kind), Some(p)) => Some(NoiseSpec::new(kind, p)?),
            (None, None) => None,
            (Some(_), None) => {
                return Err(Error::Config("noise kind given without a probability".into()))
            }
            (None, Some(_)) => {
                return Err(Error::Config("noise probability given without a kind".into()))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Resolves a single value: flag, else config file, else default.
pub fn layered<T: FromStr>(flag: Option<T>, file: Option<&ConfigFile>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(f) = file {
        if let Some(v) = f.get(key)? {
            return Ok(v);
        }
    }
    Ok(default)
}

/// Dataset directory: the flag, else `$GQHAN_DATA_DIR`, else
/// `data/fashion-mnist`.
pub fn data_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("GQHAN_DATA_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data/fashion-mnist"))
}

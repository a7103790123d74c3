//! Run configuration: defaults, `key=value` files and flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use diskgroups::critical::{DEFAULT_LENS_SEEDS, DEFAULT_SEED_RNG};
use diskgroups::orbit::DEFAULT_QUANTUM;
use diskgroups::{DiskSpec, DiskSystem, Error, PlanePoint, Result};
use serde::Serialize;

/// Every parameter that can influence a result.
///
/// Defaults: `n1 = n2 = 5`, `r1 = r2 = 2`, centers `(-1, 0)` and `(1, 0)`,
/// budget `10^6`, quantum `1e-9`, 8 lens seeds from the fixed seed
/// [`DEFAULT_SEED_RNG`], 800×800 pixels, and a viewport centered on the
/// origin `2·(max radius + 1)` wide.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n1: u32,
    pub n2: u32,
    pub r1: f64,
    pub r2: f64,
    pub center1: PlanePoint,
    pub center2: PlanePoint,
    pub budget: u64,
    pub quantum: f64,
    pub rng_seed: u64,
    pub lens_seeds: usize,
    pub out: Option<PathBuf>,
    pub width: usize,
    pub height: usize,
    pub view_center: Option<PlanePoint>,
    pub view_width: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n1: 5,
            n2: 5,
            r1: 2.0,
            r2: 2.0,
            center1: PlanePoint::new(-1.0, 0.0),
            center2: PlanePoint::new(1.0, 0.0),
            budget: 1_000_000,
            quantum: DEFAULT_QUANTUM,
            rng_seed: DEFAULT_SEED_RNG,
            lens_seeds: DEFAULT_LENS_SEEDS,
            out: None,
            width: 800,
            height: 800,
            view_center: None,
            view_width: None,
        }
    }
}

impl RunConfig {
    pub fn system(&self) -> Result<DiskSystem> {
        DiskSystem::new(vec![
            DiskSpec::new(self.center1, self.r1, self.n1),
            DiskSpec::new(self.center2, self.r2, self.n2),
        ])
    }

    /// Sets one field from its textual form. `n` and `r` set both disks.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("`{v}`: {e}"))
        }
        let point = |v: &str| v.parse::<PlanePoint>().map_err(|e| e.to_string());
        match key {
            "n" => {
                self.n1 = num(value)?;
                self.n2 = self.n1;
            }
            "n1" => self.n1 = num(value)?,
            "n2" => self.n2 = num(value)?,
            "r" => {
                self.r1 = num(value)?;
                self.r2 = self.r1;
            }
            "r1" => self.r1 = num(value)?,
            "r2" => self.r2 = num(value)?,
            "center1" => self.center1 = point(value)?,
            "center2" => self.center2 = point(value)?,
            "budget" => self.budget = num::<f64>(value).and_then(as_count)?,
            "quantum" => self.quantum = num(value)?,
            "rng_seed" => self.rng_seed = parse_u64(value)?,
            "lens_seeds" => self.lens_seeds = num(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "width" => self.width = num(value)?,
            "height" => self.height = num(value)?,
            "view_center" => self.view_center = Some(point(value)?),
            "view_width" => self.view_width = Some(num(value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}

/// Accepts `2000000`, `2e6` and the like, but only whole non-negative values.
fn as_count(v: f64) -> std::result::Result<u64, String> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 {
        Ok(v as u64)
    } else {
        Err(format!("`{v}` is not a whole count"))
    }
}

fn parse_u64(v: &str) -> std::result::Result<u64, String> {
    let parsed = match v.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => v.parse(),
    };
    parsed.map_err(|e| format!("`{v}`: {e}"))
}

/// Parses `key=value` lines over the defaults. Blank lines and text after `#`
/// are ignored.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key=value`, got `{line}`")))?;
        cfg.set(key.trim(), value.trim()).map_err(err)?;
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

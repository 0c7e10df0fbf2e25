//! Run configuration: a JSON file whose values are overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use moebius_core::structure::{PhiSpec, StructureSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub structure: Option<StructureSpec>,
    pub sigma: Option<f64>,
    pub omega: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub levels: Option<(i32, i32)>,
    pub cap: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub precision: Option<Precision>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))
    }

    /// Values set in `flags` win.
    pub fn merged(self, flags: RunConfig) -> Self {
        Self {
            structure: flags.structure.or(self.structure),
            sigma: flags.sigma.or(self.sigma),
            omega: flags.omega.or(self.omega),
            window: flags.window.or(self.window),
            levels: flags.levels.or(self.levels),
            cap: flags.cap.or(self.cap),
            samples: flags.samples.or(self.samples),
            seed: flags.seed.or(self.seed),
            precision: flags.precision.or(self.precision),
            out: flags.out.or(self.out),
            csv: flags.csv.or(self.csv),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.sigma {
            moebius_core::hyperapprox::normalize_sigma(s)?;
        }
        if self.samples == Some(0) {
            bail!("samples must be at least 1");
        }
        Ok(())
    }

    pub fn structure(&self) -> StructureSpec {
        self.structure.clone().unwrap_or(StructureSpec::Canonical)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// `canonical`, `identity`, `sine:EPS` or `power:P`.
pub fn parse_structure(s: &str) -> Result<StructureSpec, String> {
    let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
    let num = || -> Result<f64, String> {
        arg.ok_or_else(|| format!("{head} needs a parameter, e.g. {head}:0.3"))?
            .parse()
            .map_err(|e| format!("bad parameter in {s:?}: {e}"))
    };
    match head {
        "canonical" => Ok(StructureSpec::Canonical),
        "identity" => Ok(StructureSpec::Pullback { phi: PhiSpec::Identity }),
        "sine" => Ok(StructureSpec::Pullback { phi: PhiSpec::Sine { eps: num()? } }),
        "power" => Ok(StructureSpec::Power { exponent: num()? }),
        _ => Err(format!("unknown structure {s:?}; expected canonical, identity, sine:EPS or power:P")),
    }
}

/// A chart coordinate; `inf` stands for the chart base.
pub fn parse_coord(s: &str) -> Result<Option<f64>, String> {
    match s.trim() {
        "inf" | "∞" => Ok(None),
        t => t.parse().map(Some).map_err(|e| format!("bad coordinate {t:?}: {e}")),
    }
}

/// Two chart coordinates; `None` is the chart base.
pub type CoordPair = (Option<f64>, Option<f64>);

/// `A,B`.
pub fn parse_pair(s: &str) -> Result<CoordPair, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    Ok((parse_coord(a)?, parse_coord(b)?))
}

/// `A,B/C,D`: a pair and its harmonic partner.
pub fn parse_harmonic(s: &str) -> Result<[CoordPair; 2], String> {
    let (x, y) = s.split_once('/').ok_or_else(|| format!("expected A,B/C,D, got {s:?}"))?;
    Ok([parse_pair(x)?, parse_pair(y)?])
}

/// `LO..HI`.
pub fn parse_range<T: std::str::FromStr>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<T>().map_err(|e| format!("bad bound {x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// `inf` for the north pole, otherwise an angle in radians.
pub fn parse_omega(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "∞" => Ok(std::f64::consts::FRAC_PI_2),
        t => t.parse().map_err(|e| format!("bad angle {t:?}: {e}")),
    }
}

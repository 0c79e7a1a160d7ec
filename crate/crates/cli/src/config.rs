//! Run configuration: command-line flags layered over an optional key=value file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use dirac_jump::{ExtensionParams, Family, Junction, NamedExtension};

use crate::table::Format;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<dirac_jump::Error> for CliError {
    fn from(e: dirac_jump::Error) -> Self {
        use dirac_jump::Error::*;
        match e {
            SingularBoundaryMatrix { .. } | SingularSystem { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

const KNOWN_KEYS: &[&str] = &[
    "ml", "mr", "vl", "vr", "vf", "family", "strength", "alpha", "a0", "a1", "a3", "emin", "emax", "n", "out",
    "format", "seed", "direction", "smin", "smax", "comparison-mass", "samples",
];

/// Values read from a `key = value` file. Blank lines and lines starting with
/// `#` are skipped; text after `#` on a line is ignored.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("config line {}: expected key=value, got '{line}'", lineno + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(config_err(format!("config line {}: unknown key '{key}'", lineno + 1)));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(config_err(format!("config line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        Ok(ConfigFile { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| config_err(format!("config key '{key}': {e}"))))
            .transpose()
    }
}

/// A flag wins over the file; the file wins over nothing.
pub fn layered<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str) -> CliResult<Option<T>>
where
    T::Err: fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

pub fn layered_enum<T: ValueEnum>(flag: Option<T>, file: &ConfigFile, key: &str) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file
            .values
            .get(key)
            .map(|v| T::from_str(v, true).map_err(|e| config_err(format!("config key '{key}': {e}"))))
            .transpose(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct JunctionFlags {
    pub ml: Option<f64>,
    pub mr: Option<f64>,
    pub vl: Option<f64>,
    pub vr: Option<f64>,
    pub vf: Option<f64>,
}

/// Builds the junction. Velocities come as a group: if any of vl, vr, vf is
/// given as a flag the file's velocity keys are ignored. `defaults` supplies
/// masses when neither source sets them.
pub fn resolve_junction(flags: &JunctionFlags, file: &ConfigFile, defaults: Option<(f64, f64)>) -> CliResult<Junction> {
    let ml = layered(flags.ml, file, "ml")?;
    let mr = layered(flags.mr, file, "mr")?;
    let (ml, mr) = match (ml, mr, defaults) {
        (Some(l), Some(r), _) => (l, r),
        (l, r, Some((dl, dr))) => (l.unwrap_or(dl), r.unwrap_or(dr)),
        (None, _, None) => return Err(config_err("missing --ml")),
        (_, None, None) => return Err(config_err("missing --mr")),
    };
    let from_flags = flags.vl.is_some() || flags.vr.is_some() || flags.vf.is_some();
    let (vl, vr, vf) = if from_flags {
        (flags.vl, flags.vr, flags.vf)
    } else {
        (file.get("vl")?, file.get("vr")?, file.get("vf")?)
    };
    let (vl, vr) = match (vf, vl, vr) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(config_err("--vf sets both velocities and cannot be combined with --vl or --vr"))
        }
        (Some(v), None, None) => (v, v),
        (None, l, r) => (l.unwrap_or(1.0), r.unwrap_or(1.0)),
    };
    Ok(Junction::from_parts(ml, vl, mr, vr)?)
}

#[derive(Debug, Clone, Default)]
pub struct SelectorFlags {
    pub family: Option<Family>,
    pub strength: Option<f64>,
    pub alpha: Option<f64>,
    pub a0: Option<f64>,
    pub a1: Option<f64>,
    pub a3: Option<f64>,
}

impl SelectorFlags {
    fn any(&self) -> bool {
        self.family.is_some()
            || self.strength.is_some()
            || self.alpha.is_some()
            || self.a0.is_some()
            || self.a1.is_some()
            || self.a3.is_some()
    }
}

/// Which boundary condition to use: a named family or raw (alpha, a0, a1, a3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selector {
    Named(NamedExtension),
    Extension(ExtensionParams),
}

/// The selector is taken as a whole from the flags if any selector flag is
/// present, otherwise from the file.
pub fn resolve_selector(flags: &SelectorFlags, file: &ConfigFile) -> CliResult<Selector> {
    let s = if flags.any() {
        flags.clone()
    } else {
        SelectorFlags {
            family: file.get("family")?,
            strength: file.get("strength")?,
            alpha: file.get("alpha")?,
            a0: file.get("a0")?,
            a1: file.get("a1")?,
            a3: file.get("a3")?,
        }
    };
    let raw = [s.alpha, s.a0, s.a1, s.a3];
    let any_raw = raw.iter().any(Option::is_some);
    match (s.family, s.strength, any_raw) {
        (Some(_), _, true) | (None, Some(_), true) => {
            Err(config_err("give either --family/--strength or --alpha/--a0/--a1/--a3, not both"))
        }
        (Some(family), Some(strength), false) => Ok(Selector::Named(NamedExtension::new(family, strength)?)),
        (Some(_), None, false) => Err(config_err("missing --strength")),
        (None, Some(_), false) => Err(config_err("missing --family")),
        (None, None, true) => match raw {
            [Some(alpha), Some(a0), Some(a1), Some(a3)] => Ok(Selector::Extension(ExtensionParams::new(alpha, a0, a1, a3)?)),
            _ => Err(config_err("--alpha, --a0, --a1 and --a3 must all be given")),
        },
        (None, None, false) => Err(config_err("missing boundary condition: give --family and --strength")),
    }
}

#[derive(Debug, Clone, Default)]
pub struct OutputFlags {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

pub fn resolve_output(flags: &OutputFlags, file: &ConfigFile) -> CliResult<Output> {
    Ok(Output {
        out: layered(flags.out.clone(), file, "out")?,
        format: layered_enum(flags.format, file, "format")?.unwrap_or(Format::Csv),
        seed: layered(flags.seed, file, "seed")?.unwrap_or(0),
    })
}

//! Option parsing shared by the subcommands: sweep, lag, radius, dimension
//! and environment specifications, plus the optional TOML configuration file
//! whose values back-fill flags that were not given on the command line.

use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use rqa::RadiusSpec;

use crate::exit::{CliError, CliResult};

/// A single value or an inclusive start:stop:step sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepSpec {
    Single(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl SweepSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        if let Ok(v) = text.parse::<f64>() {
            return Ok(SweepSpec::Single(v));
        }
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() == 3 {
            let nums: CliResult<Vec<f64>> = parts
                .iter()
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|_| CliError::usage(format!("bad number `{p}` in sweep `{text}`")))
                })
                .collect();
            let nums = nums?;
            if !(nums[2] > 0.0) || nums[1] < nums[0] {
                return Err(CliError::usage(format!("bad sweep range `{text}`")));
            }
            return Ok(SweepSpec::Range {
                start: nums[0],
                stop: nums[1],
                step: nums[2],
            });
        }
        Err(CliError::usage(format!(
            "`{text}` is neither a number nor START:STOP:STEP"
        )))
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            SweepSpec::Single(v) => vec![v],
            SweepSpec::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }
}

/// Explicit lag or automatic first-zero-crossing selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagSpec {
    Fixed(usize),
    Auto,
}

impl LagSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.eq_ignore_ascii_case("auto") {
            return Ok(LagSpec::Auto);
        }
        match text.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(LagSpec::Fixed(v)),
            _ => Err(CliError::usage(format!(
                "lag must be a positive integer or `auto`, got `{text}`"
            ))),
        }
    }

    /// Resolves against a concrete series.
    pub fn resolve(&self, series: &[f64]) -> CliResult<usize> {
        match self {
            LagSpec::Fixed(v) => Ok(*v),
            LagSpec::Auto => Ok(rqa::autocorr_first_zero(series)?.lag),
        }
    }
}

/// Parses `sigma:START:STOP:STEP` or a comma-separated absolute radius list.
pub fn parse_radii(text: &str) -> CliResult<RadiusSpec> {
    if let Some(rest) = text.strip_prefix("sigma:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!(
                "sigma radii need START:STOP:STEP, got `{text}`"
            )));
        }
        let nums: CliResult<Vec<f64>> = parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| CliError::usage(format!("bad number `{p}` in radii `{text}`")))
            })
            .collect();
        let nums = nums?;
        return Ok(RadiusSpec::SigmaRange {
            start: nums[0],
            stop: nums[1],
            step: nums[2],
        });
    }
    let values: CliResult<Vec<f64>> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("bad radius `{p}`")))
        })
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err(CliError::usage("radius list is empty"));
    }
    Ok(RadiusSpec::Absolute(values))
}

/// Parses `uniform` or a 1-based eigenstate index.
pub fn parse_env(text: &str) -> CliResult<EnvSelection> {
    if text.eq_ignore_ascii_case("uniform") {
        return Ok(EnvSelection::Uniform);
    }
    match text.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(EnvSelection::Eigenstate(k)),
        _ => Err(CliError::usage(format!(
            "environment must be `uniform` or a 1-based index, got `{text}`"
        ))),
    }
}

/// Parses an inclusive dimension range `A:B` or a single dimension.
pub fn parse_dims(text: &str) -> CliResult<Vec<usize>> {
    let parse_one = |p: &str| {
        p.parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or_else(|| CliError::usage(format!("bad embedding dimension `{p}`")))
    };
    if let Some((a, b)) = text.split_once(':') {
        let lo = parse_one(a)?;
        let hi = parse_one(b)?;
        if hi < lo {
            return Err(CliError::usage(format!("empty dimension range `{text}`")));
        }
        return Ok((lo..=hi).collect());
    }
    Ok(vec![parse_one(text)?])
}

/// The optional TOML configuration file. Flag values win over file values.
#[derive(Default)]
pub struct ConfigFile {
    table: Option<toml::Table>,
}

impl ConfigFile {
    pub fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::data(format!("bad TOML in {}: {e}", path.display())))?;
        Ok(Self { table: Some(table) })
    }

    fn get(&self, key: &str) -> Option<&toml::Value> {
        self.table.as_ref().and_then(|t| t.get(key))
    }

    /// String-typed option: accepts TOML strings plus numeric scalars, which
    /// are rendered back to text before spec parsing.
    pub fn merge_str(&self, cli: Option<String>, key: &str) -> CliResult<Option<String>> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(toml::Value::Integer(i)) => Ok(Some(i.to_string())),
            Some(toml::Value::Float(f)) => Ok(Some(format!("{f:?}"))),
            Some(other) => Err(CliError::data(format!(
                "config key `{key}` has unusable type {}",
                other.type_str()
            ))),
        }
    }

    pub fn merge_usize(&self, cli: Option<usize>, key: &str) -> CliResult<Option<usize>> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(other) => Err(CliError::data(format!(
                "config key `{key}` must be a nonnegative integer, got {}",
                other.type_str()
            ))),
        }
    }

    pub fn merge_path(&self, cli: Option<PathBuf>, key: &str) -> CliResult<Option<PathBuf>> {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(PathBuf::from(s))),
            Some(other) => Err(CliError::data(format!(
                "config key `{key}` must be a path string, got {}",
                other.type_str()
            ))),
        }
    }
}

/// Initial input-layer state specification for the pattern selector.
#[derive(Clone, Debug, PartialEq)]
pub enum Psi0Spec {
    Uniform,
    Basis(Vec<bool>),
    File(PathBuf),
}

impl Psi0Spec {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.eq_ignore_ascii_case("uniform") {
            return Ok(Psi0Spec::Uniform);
        }
        if let Some(bits) = text.strip_prefix("basis:") {
            return Ok(Psi0Spec::Basis(parse_bits(bits)?));
        }
        if let Some(path) = text.strip_prefix("file:") {
            return Ok(Psi0Spec::File(PathBuf::from(path)));
        }
        Err(CliError::usage(format!(
            "psi0 must be `uniform`, `basis:BITS`, or `file:PATH`, got `{text}`"
        )))
    }
}

/// Parses a 0/1 string into bits, most significant neuron first.
pub fn parse_bits(text: &str) -> CliResult<Vec<bool>> {
    if text.is_empty() {
        return Err(CliError::usage("empty bit string"));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::usage(format!("bit strings use only 0/1, got `{text}`"))),
        })
        .collect()
}

pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_pattern(index: usize, width: usize) -> String {
    (0..width)
        .map(|pos| {
            if (index >> (width - 1 - pos)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!(SweepSpec::parse("0.5").unwrap(), SweepSpec::Single(0.5));
        let sweep = SweepSpec::parse("0:1:0.001").unwrap();
        let values = sweep.values();
        assert_eq!(values.len(), 1001);
        assert_eq!(values[0], 0.0);
        assert!((values[1000] - 1.0).abs() < 1e-9);
        assert!(SweepSpec::parse("1:0:0.1").is_err());
        assert!(SweepSpec::parse("a:b").is_err());
    }

    #[test]
    fn lag_parsing() {
        assert_eq!(LagSpec::parse("auto").unwrap(), LagSpec::Auto);
        assert_eq!(LagSpec::parse("3").unwrap(), LagSpec::Fixed(3));
        assert!(LagSpec::parse("0").is_err());
        assert!(LagSpec::parse("-1").is_err());
    }

    #[test]
    fn radii_parsing() {
        assert_eq!(
            parse_radii("sigma:0.5:2:0.1").unwrap(),
            RadiusSpec::SigmaRange {
                start: 0.5,
                stop: 2.0,
                step: 0.1
            }
        );
        assert_eq!(
            parse_radii("0.4,0.6").unwrap(),
            RadiusSpec::Absolute(vec![0.4, 0.6])
        );
        assert_eq!(parse_radii("0.4").unwrap(), RadiusSpec::Absolute(vec![0.4]));
        assert!(parse_radii("sigma:1:2").is_err());
        assert!(parse_radii("x").is_err());
    }

    #[test]
    fn env_and_dims_parsing() {
        assert_eq!(parse_env("uniform").unwrap(), EnvSelection::Uniform);
        assert_eq!(parse_env("4").unwrap(), EnvSelection::Eigenstate(4));
        assert!(parse_env("0").is_err());
        assert_eq!(parse_dims("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_dims("7").unwrap(), vec![7]);
        assert!(parse_dims("5:3").is_err());
    }

    #[test]
    fn bit_helpers() {
        assert_eq!(parse_bits("101").unwrap(), vec![true, false, true]);
        assert!(parse_bits("10x").is_err());
        assert_eq!(bits_to_index(&[true, false, true]), 5);
        assert_eq!(index_to_pattern(5, 3), "101");
        assert_eq!(index_to_pattern(5, 4), "0101");
    }

    #[test]
    fn psi0_parsing() {
        assert_eq!(Psi0Spec::parse("uniform").unwrap(), Psi0Spec::Uniform);
        assert_eq!(
            Psi0Spec::parse("basis:01").unwrap(),
            Psi0Spec::Basis(vec![false, true])
        );
        assert!(matches!(Psi0Spec::parse("file:x.csv").unwrap(), Psi0Spec::File(_)));
        assert!(Psi0Spec::parse("junk").is_err());
    }
}

//! Optional defaults file: NU_SPECTRA_CONFIG names a file of `key = value`
//! lines (blank lines and `#` comments allowed). Explicit flags always win.

use anyhow::{bail, Context, Result};

use crate::{Format, PotentialKind};

#[derive(Default)]
pub struct Defaults {
    pub potential: Option<PotentialKind>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub flux: Option<f64>,
    pub nmax: Option<u32>,
    pub lmax: Option<u32>,
    pub samples: Option<usize>,
    pub format: Option<Format>,
}

impl Defaults {
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("NU_SPECTRA_CONFIG") {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("cannot read {}", path.to_string_lossy()))?;
                Self::parse(&text)
                    .with_context(|| format!("invalid config {}", path.to_string_lossy()))
            }
        }
    }

    fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "potential" => {
                    out.potential = Some(match value {
                        "coulomb" => PotentialKind::Coulomb,
                        "oscillator" => PotentialKind::Oscillator,
                        "kratzer" => PotentialKind::Kratzer,
                        "mie" => PotentialKind::Mie,
                        other => bail!("line {}: unknown potential `{other}`", lineno + 1),
                    })
                }
                "a" => out.a = Some(parse_num(key, value, lineno)?),
                "b" => out.b = Some(parse_num(key, value, lineno)?),
                "c" => out.c = Some(parse_num(key, value, lineno)?),
                "hbar" => out.hbar = Some(parse_num(key, value, lineno)?),
                "mass" => out.mass = Some(parse_num(key, value, lineno)?),
                "flux" => out.flux = Some(parse_num(key, value, lineno)?),
                "nmax" => out.nmax = Some(parse_int(key, value, lineno)? as u32),
                "lmax" => out.lmax = Some(parse_int(key, value, lineno)? as u32),
                "samples" => out.samples = Some(parse_int(key, value, lineno)?),
                "format" => {
                    out.format = Some(match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        other => bail!("line {}: unknown format `{other}`", lineno + 1),
                    })
                }
                other => bail!("line {}: unknown key `{other}`", lineno + 1),
            }
        }
        Ok(out)
    }
}

fn parse_num(key: &str, value: &str, lineno: usize) -> Result<f64> {
    value
        .parse()
        .with_context(|| format!("line {}: `{key}` is not a number: `{value}`", lineno + 1))
}

fn parse_int(key: &str, value: &str, lineno: usize) -> Result<usize> {
    value
        .parse()
        .with_context(|| format!("line {}: `{key}` is not an integer: `{value}`", lineno + 1))
}

//! Reading and writing series, zeros and complex literals.

use std::path::Path;

use pnlab_core::zeros::{DensityModel, Tower};
use pnlab_core::{Complex64, Divisor, DivisorEntry, FiniteDirichletSeries};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("'{text}' is not a complex number");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

pub fn read_series(path: &Path) -> Result<FiniteDirichletSeries, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    FiniteDirichletSeries::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoint {
    pub re: f64,
    pub im: f64,
    pub n: i32,
}

/// On-disk zeros. Only `sigma1` and `entries` are required; the remaining
/// fields carry what the pairing needs to account for unlisted zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZerosFile {
    pub sigma1: Option<f64>,
    pub entries: Vec<ZeroPoint>,
    #[serde(default = "default_order")]
    pub d: u32,
    /// Height cutoff; absent for complete listings.
    #[serde(default)]
    pub ymax: Option<f64>,
    #[serde(default)]
    pub towers: Vec<Tower>,
    #[serde(default)]
    pub density: Option<DensityModel>,
}

fn default_order() -> u32 {
    2
}

impl From<&Divisor> for ZerosFile {
    fn from(d: &Divisor) -> Self {
        Self {
            sigma1: d.sigma1.is_finite().then_some(d.sigma1),
            entries: d.entries.iter().map(|e| ZeroPoint { re: e.rho.re, im: e.rho.im, n: e.n }).collect(),
            d: d.d,
            ymax: d.ymax.is_finite().then_some(d.ymax),
            towers: d.towers.clone(),
            density: d.density,
        }
    }
}

impl From<ZerosFile> for Divisor {
    fn from(z: ZerosFile) -> Self {
        let entries: Vec<DivisorEntry> = z.entries.iter().map(|p| DivisorEntry { rho: Complex64::new(p.re, p.im), n: p.n }).collect();
        let sigma1 = entries.iter().map(|e| e.rho.re).fold(f64::NEG_INFINITY, f64::max);
        Divisor {
            entries,
            sigma1: z.sigma1.unwrap_or(sigma1).max(sigma1),
            d: z.d.max(1),
            g: z.d.max(1) - 1,
            ymax: z.ymax.unwrap_or(f64::INFINITY),
            towers: z.towers,
            density: z.density,
        }
    }
}

pub fn read_zeros(path: &Path) -> Result<Divisor, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let z: ZerosFile = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(z.into())
}

pub fn write_zeros(path: &Path, z: &ZerosFile) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(z).map_err(|e| Failure::Usage(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

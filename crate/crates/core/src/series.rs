//! The coefficient series artifact and its text formats.
//!
//! Coefficient file:
//!   stacksort-coeffs v1 N=<N> provenance=<exact-certified|exact-uncertified|approximate>
//!   <n> <decimal integer>
//!
//! Per-prime checkpoint:
//!   prime=<p> N=<N>
//!   <n> <residue>

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Provenance {
    #[serde(rename = "exact-certified")]
    ExactCertified,
    #[serde(rename = "exact-uncertified")]
    ExactUncertified,
    #[serde(rename = "approximate")]
    Approximate,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ExactCertified => "exact-certified",
            Provenance::ExactUncertified => "exact-uncertified",
            Provenance::Approximate => "approximate",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Provenance {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "exact-certified" => Ok(Provenance::ExactCertified),
            "exact-uncertified" => Ok(Provenance::ExactUncertified),
            "approximate" => Ok(Provenance::Approximate),
            _ => Err(()),
        }
    }
}

/// Exact integer coefficients indexed from n = 1 (`coeffs[0]` is w_1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSeries {
    pub name: String,
    pub coeffs: Vec<BigInt>,
    pub provenance: Provenance,
}

impl CoefficientSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// w_n (1-indexed).
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n - 1]
    }

    pub fn prefix(&self, n: usize) -> CoefficientSeries {
        assert!(n <= self.len());
        CoefficientSeries {
            name: self.name.clone(),
            coeffs: self.coeffs[..n].to_vec(),
            provenance: self.provenance,
        }
    }

    /// Growth facts specific to the stack-sorting sequence:
    /// 1 <= w_n, w_n < w_{n+1} <= (n+1) w_n.
    pub fn validate_growth(&self) -> Result<()> {
        if self.coeffs.is_empty() {
            return Err(Error::Invariant("empty series".into()));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::Invariant("w_1 != 1".into()));
        }
        for (i, w) in self.coeffs.windows(2).enumerate() {
            let n = i + 1;
            if w[1] <= w[0] {
                return Err(Error::Invariant(format!("w_{} not increasing", n + 1)));
            }
            if w[1] > &w[0] * BigInt::from((n + 1) as u64) {
                return Err(Error::Invariant(format!(
                    "w_{} exceeds (n+1) w_n",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!(
            "stacksort-coeffs v1 N={} provenance={}\n",
            self.coeffs.len(),
            self.provenance
        ));
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, c));
        }
        write_atomic(path, out.as_bytes())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let ctx = || path.display().to_string();
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_err(ctx(), "empty file"))??;
        let (n, provenance) = parse_coeff_header(&header)
            .ok_or_else(|| parse_err(ctx(), format!("bad header: {header}")))?;
        let mut coeffs = Vec::with_capacity(n);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let idx: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ctx(), format!("bad line: {line}")))?;
            let value: BigInt = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ctx(), format!("bad line: {line}")))?;
            if idx != coeffs.len() + 1 {
                return Err(parse_err(ctx(), format!("index {idx} out of order")));
            }
            coeffs.push(value);
        }
        if coeffs.len() != n {
            return Err(parse_err(
                ctx(),
                format!("expected {n} coefficients, found {}", coeffs.len()),
            ));
        }
        Ok(CoefficientSeries {
            name: "w".into(),
            coeffs,
            provenance,
        })
    }
}

pub fn parse_coeff_header(header: &str) -> Option<(usize, Provenance)> {
    let mut n = None;
    let mut prov = None;
    let mut it = header.split_whitespace();
    if it.next() != Some("stacksort-coeffs") || it.next() != Some("v1") {
        return None;
    }
    for tok in it {
        if let Some(v) = tok.strip_prefix("N=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("provenance=") {
            prov = v.parse().ok();
        }
    }
    Some((n?, prov?))
}

fn parse_err(context: String, message: impl Into<String>) -> Error {
    Error::Parse {
        context,
        message: message.into(),
    }
}

/// Write via a temp file and rename so readers never see partial content.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Per-prime residue checkpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub prime: u32,
    pub n: usize,
    pub residues: Vec<u32>,
}

impl Checkpoint {
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut out = format!("prime={} N={}\n", self.prime, self.n);
        for (i, r) in self.residues.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, r));
        }
        write_atomic(path, out.as_bytes())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let ctx = || path.display().to_string();
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_err(ctx(), "empty checkpoint"))??;
        let mut prime = None;
        let mut n = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("prime=") {
                prime = v.parse::<u32>().ok();
            } else if let Some(v) = tok.strip_prefix("N=") {
                n = v.parse::<usize>().ok();
            }
        }
        let (prime, n) = match (prime, n) {
            (Some(p), Some(n)) => (p, n),
            _ => return Err(parse_err(ctx(), format!("bad header: {header}"))),
        };
        let mut residues = Vec::with_capacity(n);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let idx: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ctx(), format!("bad line: {line}")))?;
            let value: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(ctx(), format!("bad line: {line}")))?;
            if idx != residues.len() + 1 {
                return Err(parse_err(ctx(), format!("index {idx} out of order")));
            }
            if value >= prime {
                return Err(parse_err(ctx(), format!("residue {value} >= prime {prime}")));
            }
            residues.push(value);
        }
        if residues.len() != n {
            return Err(parse_err(
                ctx(),
                format!("expected {n} residues, found {}", residues.len()),
            ));
        }
        Ok(Checkpoint { prime, n, residues })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn sample_series() -> CoefficientSeries {
        CoefficientSeries {
            name: "w".into(),
            coeffs: [1u64, 2, 6, 24, 114]
                .iter()
                .map(|&v| BigInt::from_u64(v).unwrap())
                .collect(),
            provenance: Provenance::ExactCertified,
        }
    }

    #[test]
    fn coefficient_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        let s = sample_series();
        s.write_to(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("stacksort-coeffs v1 N=5 provenance=exact-certified\n"));
        assert!(text.contains("\n5 114\n"));
        let back = CoefficientSeries::read_from(&path).unwrap();
        assert_eq!(back.coeffs, s.coeffs);
        assert_eq!(back.provenance, s.provenance);
    }

    #[test]
    fn growth_validation() {
        assert!(sample_series().validate_growth().is_ok());
        let mut bad = sample_series();
        bad.coeffs[4] = BigInt::from(1000u64); // > 5 * w_4
        assert!(bad.validate_growth().is_err());
        let mut dec = sample_series();
        dec.coeffs[3] = BigInt::from(5u64);
        assert!(dec.validate_growth().is_err());
    }

    #[test]
    fn checkpoint_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("prime_11.txt");
        let cp = Checkpoint {
            prime: 11,
            n: 3,
            residues: vec![1, 2, 6],
        };
        cp.write_to(&path).unwrap();
        assert_eq!(Checkpoint::read_from(&path).unwrap(), cp);
        // a residue >= p is rejected
        std::fs::write(&path, "prime=5 N=1\n1 7\n").unwrap();
        assert!(Checkpoint::read_from(&path).is_err());
    }

    #[test]
    fn corrupted_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "something-else v1 N=3\n").unwrap();
        assert!(CoefficientSeries::read_from(&path).is_err());
    }
}

//! Experiment specification files.
//!
//! One `key = value` pair per line; blank lines and lines starting with `#` are ignored.
//!
//! ```text
//! families = 1,1,2,1; 1,1,4,1
//! primes = 3, 5
//! samples = 5
//! seed = 0
//! budget = 1000000000
//! flags = overdegree, nondeg=with-f, K=4, g=closed
//! ```
//!
//! Cells are enumerated family-major, then prime, then sample. The cell with
//! index `i` (from 0) is sampled with seed `splitmix64(seed + (i + 1)·0x9E3779B97F4A7C15)`,
//! all arithmetic wrapping mod 2^64.

use std::collections::BTreeSet;

use toricnp::family::{ABParams, GRange, NondegMode};
use toricnp::field::DEFAULT_BUDGET;
use toricnp::rational::is_prime;

use crate::error::{CliError, CliResult};

pub const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn cell_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(SEED_STRIDE)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunFlags {
    /// Also check that `A_{N+1}` and `A_{N+2}` vanish.
    pub check_overdegree: bool,
    pub nondeg: NondegMode,
    /// Degree range of the `x_0`-free part `g`.
    pub g_range: GRange,
}

impl Default for RunFlags {
    fn default() -> Self {
        RunFlags { check_overdegree: false, nondeg: NondegMode::default(), g_range: GRange::Strict }
    }
}

impl RunFlags {
    pub fn nondeg_label(&self) -> &'static str {
        if self.nondeg.include_f { "with-f" } else { "standard" }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub families: Vec<ABParams>,
    pub primes: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    pub budget: u128,
    pub flags: RunFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellSpec {
    pub index: usize,
    pub family: ABParams,
    pub p: u64,
    pub sample: usize,
    pub seed: u64,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| bad(format!("{key}: cannot parse {s:?}: {e}")))
}

fn parse_flags(value: &str) -> CliResult<RunFlags> {
    let mut flags = RunFlags::default();
    for token in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
            None if token == "overdegree" => flags.check_overdegree = true,
            Some(("nondeg", "standard")) => flags.nondeg.include_f = false,
            Some(("nondeg", "with-f")) => flags.nondeg.include_f = true,
            Some(("g", "strict")) => flags.g_range = GRange::Strict,
            Some(("g", "closed")) => flags.g_range = GRange::Closed,
            Some(("K" | "k", v)) => {
                let k: usize = parse_num("flags K", v)?;
                if k == 0 {
                    return Err(bad("flags K must be positive"));
                }
                flags.nondeg.k_max = k;
            }
            _ => return Err(bad(format!("unknown flag {token:?}"))),
        }
    }
    Ok(flags)
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut families = None;
        let mut primes = None;
        let mut samples = None;
        let mut seed = 0u64;
        let mut budget = DEFAULT_BUDGET;
        let mut flags = RunFlags::default();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(bad(format!("line {}: duplicate key {key}", lineno + 1)));
            }
            match key {
                "families" => {
                    families = Some(
                        value
                            .split(';')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(|s| ABParams::parse(s).map_err(CliError::from))
                            .collect::<CliResult<Vec<_>>>()?,
                    )
                }
                "primes" => {
                    primes = Some(
                        value
                            .split(',')
                            .map(|s| parse_num::<u64>("primes", s))
                            .collect::<CliResult<Vec<_>>>()?,
                    )
                }
                "samples" => samples = Some(parse_num::<usize>("samples", value)?),
                "seed" => seed = parse_num("seed", value)?,
                "budget" => budget = parse_num("budget", value)?,
                "flags" => flags = parse_flags(value)?,
                other => return Err(bad(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        let spec = ExperimentSpec {
            families: families.ok_or_else(|| bad("missing key: families"))?,
            primes: primes.ok_or_else(|| bad("missing key: primes"))?,
            samples: samples.ok_or_else(|| bad("missing key: samples"))?,
            seed,
            budget,
            flags,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.families.is_empty() || self.primes.is_empty() || self.samples == 0 {
            return Err(bad("families, primes and samples must be nonempty"));
        }
        for &p in &self.primes {
            if !is_prime(p) {
                return Err(bad(format!("{p} is not prime")));
            }
            for q in &self.families {
                q.check_prime(p)?;
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<CellSpec> {
        let mut out = Vec::new();
        for &family in &self.families {
            for &p in &self.primes {
                for sample in 0..self.samples {
                    let index = out.len();
                    out.push(CellSpec { index, family, p, sample, seed: cell_seed(self.seed, index as u64) });
                }
            }
        }
        out
    }
}

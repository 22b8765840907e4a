use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::evolution::{LsMode, SstConfig};
use crate::fitness::SEED_GROUPS;
use crate::gp::GpConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    Tt,
    TtRi,
    Fp,
    Gp,
    GpPart,
    GpFull,
    GpScnd,
}

impl Encoding {
    pub const ALL: [Encoding; 7] = [
        Encoding::Tt,
        Encoding::TtRi,
        Encoding::Fp,
        Encoding::Gp,
        Encoding::GpPart,
        Encoding::GpFull,
        Encoding::GpScnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Encoding::Tt => "tt",
            Encoding::TtRi => "tt-ri",
            Encoding::Fp => "fp",
            Encoding::Gp => "gp",
            Encoding::GpPart => "gp-part",
            Encoding::GpFull => "gp-full",
            Encoding::GpScnd => "gp-scnd",
        }
    }

    pub fn is_bitstring(self) -> bool {
        matches!(self, Encoding::Tt | Encoding::TtRi)
    }

    pub fn is_tree(self) -> bool {
        matches!(
            self,
            Encoding::Gp | Encoding::GpPart | Encoding::GpFull | Encoding::GpScnd
        )
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Encoding::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown encoding '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sst,
    /// The steady-state GA over real vectors.
    FpSst,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sst => "sst",
            Algorithm::FpSst => "fp-sst",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sst" => Ok(Algorithm::Sst),
            "fp-sst" => Ok(Algorithm::FpSst),
            _ => Err(Error::Config(format!("unknown algorithm '{s}'"))),
        }
    }
}

/// Row label in the style `TT/SST-RI-LS1`, `GP/SST-PART-LS`, `GP/SCND`.
pub fn variant_label(encoding: Encoding, ls: LsMode) -> String {
    let ls_suffix = |s: &mut String| {
        if ls != LsMode::None {
            s.push('-');
            s.push_str(&ls.name().to_ascii_uppercase());
        }
    };
    let mut s = String::new();
    match encoding {
        Encoding::Tt => {
            s.push_str("TT/SST");
            ls_suffix(&mut s);
        }
        Encoding::TtRi => {
            s.push_str("TT/SST-RI");
            ls_suffix(&mut s);
        }
        Encoding::Fp => {
            s.push_str("FP/SST");
            ls_suffix(&mut s);
        }
        Encoding::Gp | Encoding::GpPart | Encoding::GpFull => {
            s.push_str("GP/SST");
            match encoding {
                Encoding::GpPart => s.push_str("-PART"),
                Encoding::GpFull => s.push_str("-FULL"),
                _ => {}
            }
            if ls != LsMode::None {
                s.push_str("-LS");
            }
        }
        Encoding::GpScnd => s.push_str("GP/SCND"),
    }
    s
}

/// A campaign: `runs` independent runs of one encoding/algorithm variant.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub encoding: Encoding,
    pub algo: Algorithm,
    pub ls: LsMode,
    pub runs: usize,
    pub budget: u64,
    /// Per-run wall-clock limit in seconds.
    pub time_limit: Option<f64>,
    pub seed: u64,
    pub pop_size: usize,
    pub p_mut: f64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    /// Bits per coordinate for `fp`.
    pub dec: u32,
    pub ls_trials: usize,
    pub ls_fraction: f64,
    pub gp: GpConfig,
    /// Seed-function file for `gp-scnd`; random balanced groups otherwise.
    pub seed_groups: Option<PathBuf>,
    /// Any value other than the standard count must be set explicitly.
    pub seed_group_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let sst = SstConfig::default();
        ExperimentConfig {
            n: 9,
            encoding: Encoding::Tt,
            algo: Algorithm::Sst,
            ls: LsMode::None,
            runs: 30,
            budget: sst.budget,
            time_limit: None,
            seed: 42,
            pop_size: sst.pop_size,
            p_mut: sst.p_mut,
            threads: 1,
            out: None,
            dec: 3,
            ls_trials: sst.ls_trials,
            ls_fraction: sst.ls_fraction,
            gp: GpConfig::default(),
            seed_groups: None,
            seed_group_count: SEED_GROUPS,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for {key}")))
}

impl ExperimentConfig {
    pub fn label(&self) -> String {
        variant_label(self.encoding, self.ls)
    }

    pub fn validate(&self) -> Result<()> {
        let min_n = if self.encoding == Encoding::GpScnd {
            3
        } else {
            1
        };
        if self.n < min_n || self.n > crate::boolfn::MAX_VARIABLES {
            return Err(Error::InvalidVariableCount {
                n: self.n,
                reason: "unsupported for this encoding",
            });
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("time limit {t} must be positive")));
            }
        }
        if self.algo == Algorithm::FpSst && self.encoding != Encoding::Fp {
            return Err(Error::Config(format!(
                "algorithm fp-sst needs the fp encoding, got {}",
                self.encoding
            )));
        }
        if self.ls.needs_bit_access() && !self.encoding.is_bitstring() {
            return Err(Error::Config(format!(
                "{} needs a bitstring genotype, {} has none",
                self.ls, self.encoding
            )));
        }
        if self.encoding == Encoding::GpScnd && self.ls != LsMode::None {
            return Err(Error::Config("gp-scnd does not take local search".into()));
        }
        if self.seed_group_count == 0 {
            return Err(Error::Config("seed_group_count must be at least 1".into()));
        }
        self.sst_config(0).validate()
    }

    /// Engine settings for one run.
    pub fn sst_config(&self, seed: u64) -> SstConfig {
        SstConfig {
            pop_size: self.pop_size,
            p_mut: self.p_mut,
            budget: self.budget,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            ls: self.ls,
            ls_trials: self.ls_trials,
            ls_fraction: self.ls_fraction,
            seed,
        }
    }

    /// Sets one field from its `key=value` spelling.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let v = value.trim();
        match key.as_str() {
            "n" => self.n = parse(&key, v)?,
            "encoding" => self.encoding = v.parse()?,
            "algo" | "algorithm" => self.algo = v.parse()?,
            "ls" => self.ls = v.parse()?,
            "runs" => self.runs = parse(&key, v)?,
            "budget" => self.budget = parse(&key, v)?,
            "time-limit" => {
                self.time_limit = if v.is_empty() || v == "none" {
                    None
                } else {
                    Some(parse(&key, v)?)
                }
            }
            "seed" => self.seed = parse(&key, v)?,
            "pop" | "pop-size" => self.pop_size = parse(&key, v)?,
            "p-mut" => self.p_mut = parse(&key, v)?,
            "threads" => self.threads = parse(&key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "dec" => self.dec = parse(&key, v)?,
            "ls-trials" => self.ls_trials = parse(&key, v)?,
            "ls-fraction" => self.ls_fraction = parse(&key, v)?,
            "max-depth" => self.gp.max_depth = parse(&key, v)?,
            "seed-groups" => self.seed_groups = Some(PathBuf::from(v)),
            "seed-group-count" => self.seed_group_count = parse(&key, v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_kv_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }
}

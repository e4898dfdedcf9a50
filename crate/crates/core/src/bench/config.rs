//! Experiment configuration and its `key = value` file format.
//!
//! ```text
//! # pancake sweep
//! domain = pancake
//! heuristic = gap
//! size = 10
//! seeds = 0..99
//! weights = 1.2, 1.5, 2, 4, 8, 16
//! oracle = true
//! ```
//!
//! Recognised keys: `domain`, `heuristic`, `size`, `seeds` (inclusive
//! range), `instances` (comma-separated paths, relative to the config file),
//! `weights`, `max_expansions`, `max_seconds`, `oracle`, `oracle_max_states`,
//! `jobs`, `reopening`, `timing`.

use crate::domains::{DomainKind, ParseError};
use crate::DEFAULT_WEIGHTS;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    /// The `h` values stored in a graph file.
    File,
    Manhattan,
    /// GAP-k; 0 is plain GAP.
    Gap(u8),
    Mst,
}

impl HeuristicKind {
    /// The heuristic used when none is named.
    pub fn default_for(domain: DomainKind) -> Self {
        match domain {
            DomainKind::Graph => HeuristicKind::File,
            DomainKind::Tile => HeuristicKind::Manhattan,
            DomainKind::Pancake => HeuristicKind::Gap(0),
            DomainKind::Routing => HeuristicKind::Mst,
        }
    }

    pub fn supports(self, domain: DomainKind) -> bool {
        matches!(
            (domain, self),
            (DomainKind::Graph, HeuristicKind::File)
                | (DomainKind::Tile, HeuristicKind::Manhattan)
                | (DomainKind::Pancake, HeuristicKind::Gap(_))
                | (DomainKind::Routing, HeuristicKind::Mst)
        )
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicKind::File => f.write_str("file"),
            HeuristicKind::Manhattan => f.write_str("manhattan"),
            HeuristicKind::Gap(0) => f.write_str("gap"),
            HeuristicKind::Gap(k) => write!(f, "gap{k}"),
            HeuristicKind::Mst => f.write_str("mst"),
        }
    }
}

impl FromStr for HeuristicKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "file" => Ok(HeuristicKind::File),
            "manhattan" => Ok(HeuristicKind::Manhattan),
            "gap" => Ok(HeuristicKind::Gap(0)),
            "gap1" | "gap-1" => Ok(HeuristicKind::Gap(1)),
            "gap2" | "gap-2" => Ok(HeuristicKind::Gap(2)),
            "mst" => Ok(HeuristicKind::Mst),
            other => Err(format!(
                "unknown heuristic `{other}` (file, manhattan, gap, gap1, gap2, mst)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generated { size: usize, seeds: RangeInclusive<u64> },
    Files(Vec<PathBuf>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub domain: DomainKind,
    pub heuristic: HeuristicKind,
    pub source: InstanceSource,
    pub weights: Vec<f64>,
    pub max_expansions: u64,
    pub max_time: Duration,
    pub oracle: bool,
    pub oracle_max_states: u64,
    pub jobs: usize,
    pub reopening: bool,
    /// Fill the `wall_ms` column. Off by default so output is reproducible.
    pub timing: bool,
}

pub const DEFAULT_MAX_EXPANSIONS: u64 = 1_000_000;
pub const DEFAULT_MAX_SECONDS: u64 = 60;
pub const DEFAULT_ORACLE_MAX_STATES: u64 = 20_000_000;

impl ExperimentConfig {
    pub fn new(domain: DomainKind, source: InstanceSource) -> Self {
        ExperimentConfig {
            domain,
            heuristic: HeuristicKind::default_for(domain),
            source,
            weights: DEFAULT_WEIGHTS.to_vec(),
            max_expansions: DEFAULT_MAX_EXPANSIONS,
            max_time: Duration::from_secs(DEFAULT_MAX_SECONDS),
            oracle: true,
            oracle_max_states: DEFAULT_ORACLE_MAX_STATES,
            jobs: 1,
            reopening: true,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.weights.is_empty() {
            return Err("at least one weight is required".to_string());
        }
        if let Some(w) = self.weights.iter().find(|w| !w.is_finite() || **w < 1.0) {
            return Err(format!("weight {w} is below 1"));
        }
        if !self.heuristic.supports(self.domain) {
            return Err(format!(
                "heuristic {} does not apply to domain {}",
                self.heuristic, self.domain
            ));
        }
        if self.jobs == 0 {
            return Err("jobs must be at least 1".to_string());
        }
        match &self.source {
            InstanceSource::Generated { .. } if self.domain == DomainKind::Graph => {
                Err("graph experiments need `instances`".to_string())
            }
            InstanceSource::Files(f) if f.is_empty() => Err("no instance files given".to_string()),
            _ => Ok(()),
        }
    }

    /// Parses a config file; relative instance paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ParseError> {
        parse_config(text, base_dir)
    }
}

/// Parses `a..b` (inclusive) or a single number.
pub fn parse_seed_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = || format!("invalid seed range `{s}` (expected a..b)");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (u64, u64) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a: u64 = s.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

fn parse_config(text: &str, base_dir: &Path) -> Result<ExperimentConfig, ParseError> {
    let mut domain = None;
    let mut heuristic = None;
    let mut size = None;
    let mut seeds = None;
    let mut files: Option<Vec<PathBuf>> = None;
    let mut weights = None;
    let mut max_expansions = DEFAULT_MAX_EXPANSIONS;
    let mut max_seconds = DEFAULT_MAX_SECONDS as f64;
    let mut oracle = true;
    let mut oracle_max_states = DEFAULT_ORACLE_MAX_STATES;
    let mut jobs = 1usize;
    let mut reopening = true;
    let mut timing = false;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let key_col = line.len() - line.trim_start().len() + 1;
        let Some(eq) = line.find('=') else {
            return Err(ParseError::new(ln, key_col, "expected `key = value`"));
        };
        let (key, value) = (line[..eq].trim(), &line[eq + 1..]);
        let value_col = eq + 2 + (value.len() - value.trim_start().len());
        let value = value.trim();
        let err = |m: String| ParseError::new(ln, value_col, m);
        let parse_bool = |v: &str| match v {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(err(format!("expected true or false, found `{other}`"))),
        };
        match key {
            "domain" => domain = Some(value.parse::<DomainKind>().map_err(err)?),
            "heuristic" => heuristic = Some(value.parse::<HeuristicKind>().map_err(err)?),
            "size" => {
                size = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| err(format!("invalid size `{value}`")))?,
                )
            }
            "seeds" => seeds = Some(parse_seed_range(value).map_err(err)?),
            "instances" => {
                files = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(|p| base_dir.join(p))
                        .collect(),
                )
            }
            "weights" => {
                let ws = value
                    .split(',')
                    .map(|w| {
                        w.trim()
                            .parse::<f64>()
                            .map_err(|_| err(format!("invalid weight `{}`", w.trim())))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                weights = Some(ws);
            }
            "max_expansions" => max_expansions = value.parse().map_err(|_| err(format!("invalid count `{value}`")))?,
            "max_seconds" => {
                max_seconds = value
                    .parse::<f64>()
                    .ok()
                    .filter(|s| s.is_finite() && *s > 0.0)
                    .ok_or_else(|| err(format!("invalid duration `{value}`")))?
            }
            "oracle" => oracle = parse_bool(value)?,
            "oracle_max_states" => {
                oracle_max_states = value.parse().map_err(|_| err(format!("invalid count `{value}`")))?
            }
            "jobs" => jobs = value.parse().map_err(|_| err(format!("invalid job count `{value}`")))?,
            "reopening" => reopening = parse_bool(value)?,
            "timing" => timing = parse_bool(value)?,
            other => return Err(ParseError::new(ln, key_col, format!("unknown key `{other}`"))),
        }
    }

    let last = text.lines().count().max(1);
    let domain = domain.ok_or_else(|| ParseError::new(last, 1, "missing `domain`"))?;
    let source = match (files, size, seeds) {
        (Some(f), _, _) => InstanceSource::Files(f),
        (None, Some(size), Some(seeds)) => InstanceSource::Generated { size, seeds },
        _ => {
            return Err(ParseError::new(
                last,
                1,
                "need either `instances` or both `size` and `seeds`",
            ))
        }
    };
    let mut config = ExperimentConfig::new(domain, source);
    if let Some(h) = heuristic {
        config.heuristic = h;
    }
    if let Some(w) = weights {
        config.weights = w;
    }
    config.max_expansions = max_expansions;
    config.max_time = Duration::from_secs_f64(max_seconds);
    config.oracle = oracle;
    config.oracle_max_states = oracle_max_states;
    config.jobs = jobs;
    config.reopening = reopening;
    config.timing = timing;
    config.validate().map_err(|m| ParseError::new(last, 1, m))?;
    Ok(config)
}

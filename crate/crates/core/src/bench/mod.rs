//! Experiment harness: sweeps instances × weights, attaches oracle costs and
//! bounds, and reads/writes the result CSV.

pub mod config;
pub mod stats;

pub use config::{parse_seed_range, ExperimentConfig, HeuristicKind, InstanceSource};
pub use stats::{boxplot_stats, commonly_solved, summarize, BoxplotStats, GroupBy, GroupSummary};

use crate::bounds::{make_report, BoundError, BoundReport};
use crate::domains::pancake::parse_pancake_instances;
use crate::domains::routing::parse_routing_instances;
use crate::domains::tile::parse_tile_instances;
use crate::domains::{
    generate_instance, DomainKind, ExplicitGraph, GapHeuristic, Instance, PancakeProblem, ParseError, RoutingProblem,
    TilePuzzle,
};
use crate::oracle::optimal_cost;
use crate::search::{weighted_astar, Limits, SearchOptions, SearchResult, SearchStatus, StateSpace, Weight};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One CSV row: a single (instance, W) run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub domain: String,
    pub heuristic: String,
    pub instance_id: String,
    #[serde(rename = "W")]
    pub weight: f64,
    pub solved: bool,
    #[serde(rename = "C")]
    pub cost: Option<f64>,
    #[serde(rename = "C_star")]
    pub optimal_cost: Option<f64>,
    pub expansions: u64,
    pub iterations: u64,
    #[serde(rename = "F")]
    pub f_w_max: Option<f64>,
    #[serde(rename = "g_min_at_F")]
    pub g_min_at_f: Option<f64>,
    pub f_min_final: Option<f64>,
    pub combined_max: Option<f64>,
    pub w_bound: Option<f64>,
    #[serde(rename = "F_bound")]
    pub f_max_bound: Option<f64>,
    #[serde(rename = "F_bound_combined")]
    pub f_max_bound_combined: Option<f64>,
    #[serde(rename = "f_bound")]
    pub f_min_bound: Option<f64>,
    pub subopt: Option<f64>,
    #[serde(rename = "rho_F")]
    pub rho_f_max: Option<f64>,
    #[serde(rename = "rho_f")]
    pub rho_f_min: Option<f64>,
    pub wall_ms: Option<f64>,
}

/// Header of the result CSV, in column order.
pub const CSV_HEADER: &str = "domain,heuristic,instance_id,W,solved,C,C_star,expansions,iterations,F,g_min_at_F,f_min_final,combined_max,w_bound,F_bound,F_bound_combined,f_bound,subopt,rho_F,rho_f,wall_ms";

/// A loaded search problem with `f64` costs.
#[derive(Debug, Clone)]
pub enum Problem {
    Graph(ExplicitGraph<f64>),
    Tile(TilePuzzle<f64>),
    Pancake(PancakeProblem<f64>),
    Routing(RoutingProblem<f64>),
}

#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub id: String,
    pub problem: Problem,
}

impl Problem {
    pub fn from_instance(instance: &Instance, heuristic: HeuristicKind) -> Result<Self, String> {
        match (instance, heuristic) {
            (Instance::Tile(t), HeuristicKind::Manhattan) => Ok(Problem::Tile(TilePuzzle::from_tiles(t)?)),
            (Instance::Pancake(p), HeuristicKind::Gap(k)) => {
                Ok(Problem::Pancake(PancakeProblem::new(p, GapHeuristic { ignore: k })?))
            }
            (Instance::Routing(r), HeuristicKind::Mst) => Ok(Problem::Routing(RoutingProblem::new(r.clone()))),
            (_, h) => Err(format!("heuristic {h} does not match the instance")),
        }
    }
}

fn read_file(path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Reads every instance in a domain file; tile, pancake and routing files
/// may hold several.
pub fn load_instance_file(
    domain: DomainKind,
    heuristic: HeuristicKind,
    path: &Path,
) -> Result<Vec<LoadedInstance>, BenchError> {
    let text = read_file(path)?;
    load_instance_text(domain, heuristic, &text, path)
}

/// Parses instance text. `origin` names the source in errors and supplies
/// the instance id: its file stem, suffixed `#k` when there are several.
pub fn load_instance_text(
    domain: DomainKind,
    heuristic: HeuristicKind,
    text: &str,
    origin: &Path,
) -> Result<Vec<LoadedInstance>, BenchError> {
    let parse_err = |err| BenchError::Parse {
        path: origin.to_path_buf(),
        err,
    };
    let stem = file_stem(origin);
    let instances: Vec<Instance> = match domain {
        DomainKind::Graph => {
            if heuristic != HeuristicKind::File {
                return Err(BenchError::Config(format!(
                    "graph instances use the file heuristic, not {heuristic}"
                )));
            }
            let g = ExplicitGraph::<f64>::parse(text).map_err(parse_err)?;
            return Ok(vec![LoadedInstance {
                id: stem,
                problem: Problem::Graph(g),
            }]);
        }
        DomainKind::Tile => parse_tile_instances(text)
            .map_err(parse_err)?
            .into_iter()
            .map(Instance::Tile)
            .collect(),
        DomainKind::Pancake => parse_pancake_instances(text)
            .map_err(parse_err)?
            .into_iter()
            .map(Instance::Pancake)
            .collect(),
        DomainKind::Routing => parse_routing_instances(text)
            .map_err(parse_err)?
            .into_iter()
            .map(Instance::Routing)
            .collect(),
    };
    let multi = instances.len() > 1;
    instances
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let id = if multi { format!("{stem}#{i}") } else { stem.clone() };
            let problem = Problem::from_instance(inst, heuristic).map_err(BenchError::Config)?;
            Ok(LoadedInstance { id, problem })
        })
        .collect()
}

pub fn load_instances(config: &ExperimentConfig) -> Result<Vec<LoadedInstance>, BenchError> {
    config.validate().map_err(BenchError::Config)?;
    match &config.source {
        InstanceSource::Generated { size, seeds } => seeds
            .clone()
            .map(|seed| {
                let inst = generate_instance(config.domain, *size, seed).map_err(BenchError::Config)?;
                let problem = Problem::from_instance(&inst, config.heuristic).map_err(BenchError::Config)?;
                Ok(LoadedInstance {
                    id: format!("s{seed}"),
                    problem,
                })
            })
            .collect(),
        InstanceSource::Files(files) => {
            let mut out = Vec::new();
            for f in files {
                out.extend(load_instance_file(config.domain, config.heuristic, f)?);
            }
            Ok(out)
        }
    }
}

/// A search result with its bound report, absent when unsolved.
pub type SolvedReport<S, C> = (SearchResult<S, C>, Option<Result<BoundReport<C>, BoundError>>);

/// Runs wA* and builds the bound report against an optional `C*`.
pub fn solve_and_report<M: StateSpace>(
    space: &M,
    weight: Weight<M::Cost>,
    limits: Limits,
    options: SearchOptions,
    optimal: Option<M::Cost>,
) -> Result<SolvedReport<M::State, M::Cost>, crate::SearchError> {
    let result = weighted_astar(space, weight, limits, options)?;
    let report = (result.status == SearchStatus::Solved).then(|| make_report(&result, weight, optimal));
    Ok((result, report))
}

struct RunSettings<'a> {
    config: &'a ExperimentConfig,
    domain: &'a str,
    heuristic: String,
}

fn run_space<M: StateSpace<Cost = f64>>(
    space: &M,
    instance_id: &str,
    settings: &RunSettings<'_>,
) -> Vec<ExperimentRecord> {
    let config = settings.config;
    let optimal = if config.oracle {
        optimal_cost(space, Limits::expansions(config.oracle_max_states))
            .ok()
            .map(|r| r.optimal_cost)
    } else {
        None
    };
    let limits = Limits {
        max_expansions: Some(config.max_expansions),
        max_time: Some(config.max_time),
    };
    let options = SearchOptions {
        reopening: config.reopening,
        audit_open: false,
    };
    config
        .weights
        .iter()
        .map(|&w| {
            let mut rec = ExperimentRecord {
                domain: settings.domain.to_string(),
                heuristic: settings.heuristic.clone(),
                instance_id: instance_id.to_string(),
                weight: w,
                optimal_cost: optimal,
                ..ExperimentRecord::default()
            };
            let Ok(weight) = Weight::new(w) else {
                return rec;
            };
            let started = Instant::now();
            let outcome = solve_and_report(space, weight, limits, options, optimal);
            if config.timing {
                rec.wall_ms = Some(started.elapsed().as_secs_f64() * 1e3);
            }
            let Ok((result, report)) = outcome else {
                return rec;
            };
            rec.expansions = result.expansions;
            rec.iterations = result.iterations;
            rec.solved = result.status == SearchStatus::Solved;
            if !rec.solved {
                return rec;
            }
            let t = result.trace;
            rec.cost = result.cost;
            rec.f_w_max = Some(t.f_w_max);
            rec.g_min_at_f = Some(t.g_min_at_f);
            rec.f_min_final = t.f_min_final;
            rec.combined_max = Some(t.combined_max);
            match report {
                Some(Ok(r)) => fill_bounds(&mut rec, &r),
                Some(Err(BoundError::BoundViolation { .. })) | Some(Err(BoundError::SuboptBelowOne(_))) => {
                    // Only possible with an inadmissible heuristic or a wrong C*;
                    // keep the raw bounds and leave rho empty.
                    if let Ok(r) = make_report(&result, weight, None) {
                        fill_bounds(&mut rec, &r);
                    }
                    rec.subopt = optimal.filter(|c| *c > 0.0).zip(rec.cost).map(|(o, c)| c / o);
                    eprintln!(
                        "warning: {} {} W={w}: bound outside [C/C*, W]; rho left empty",
                        settings.domain, instance_id
                    );
                }
                _ => {}
            }
            rec
        })
        .collect()
}

fn fill_bounds(rec: &mut ExperimentRecord, r: &BoundReport<f64>) {
    rec.w_bound = Some(r.w_bound);
    rec.f_max_bound = Some(r.f_max_bound);
    rec.f_max_bound_combined = Some(r.f_max_bound_combined);
    rec.f_min_bound = Some(r.f_min_bound);
    rec.subopt = r.subopt;
    rec.rho_f_max = r.rho_f_max;
    rec.rho_f_min = r.rho_f_min;
}

fn run_instance(inst: &LoadedInstance, settings: &RunSettings<'_>) -> Vec<ExperimentRecord> {
    match &inst.problem {
        Problem::Graph(g) => run_space(g, &inst.id, settings),
        Problem::Tile(p) => run_space(p, &inst.id, settings),
        Problem::Pancake(p) => run_space(p, &inst.id, settings),
        Problem::Routing(p) => run_space(p, &inst.id, settings),
    }
}

/// Runs every (instance, W) pair. Rows come back ordered by instance, then
/// by the config's weight order, whatever `jobs` is.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, BenchError> {
    let instances = load_instances(config)?;
    run_loaded(config, &instances)
}

pub fn run_loaded(
    config: &ExperimentConfig,
    instances: &[LoadedInstance],
) -> Result<Vec<ExperimentRecord>, BenchError> {
    config.validate().map_err(BenchError::Config)?;
    let settings = RunSettings {
        config,
        domain: config.domain.name(),
        heuristic: config.heuristic.to_string(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let per_instance: Vec<Vec<ExperimentRecord>> =
        pool.install(|| instances.par_iter().map(|i| run_instance(i, &settings)).collect());
    Ok(per_instance.into_iter().flatten().collect())
}

pub fn write_csv<W: io::Write>(records: &[ExperimentRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| BenchError::Io {
        path: PathBuf::from("<csv>"),
        source,
    })?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<ExperimentRecord>, BenchError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(BenchError::Config(format!(
            "unexpected CSV header `{}`",
            header.join(",")
        )));
    }
    Ok(r.deserialize().collect::<Result<Vec<_>, _>>()?)
}

fn group_label(s: &GroupSummary) -> String {
    s.heuristic.clone().unwrap_or_else(|| "*".to_string())
}

/// Header of the per-group summary CSV.
pub const SUMMARY_HEADER: &str =
    "heuristic,W,solved,above_sqrt_W,fraction_optimal,median_subopt,median_rho_F,median_rho_f";

/// Header of the boxplot CSV.
pub const BOXPLOT_HEADER: &str = "heuristic,W,metric,n,q1,median,q3,whisker_low,whisker_high,outliers";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_summary_csv<W: io::Write>(summaries: &[GroupSummary], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER.split(','))?;
    for s in summaries {
        w.write_record([
            group_label(s),
            s.weight.to_string(),
            s.solved.to_string(),
            s.above_sqrt_w.to_string(),
            opt(s.fraction_optimal),
            opt(s.subopt.as_ref().map(|b| b.median)),
            opt(s.rho_f_max.as_ref().map(|b| b.median)),
            opt(s.rho_f_min.as_ref().map(|b| b.median)),
        ])?;
    }
    w.flush().map_err(|source| BenchError::Io {
        path: PathBuf::from("<csv>"),
        source,
    })?;
    Ok(())
}

/// One row per (group, metric) with the box, whiskers and `;`-joined outliers.
pub fn write_boxplot_csv<W: io::Write>(summaries: &[GroupSummary], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOXPLOT_HEADER.split(','))?;
    for s in summaries {
        for (metric, stats) in [("subopt", &s.subopt), ("rho_F", &s.rho_f_max), ("rho_f", &s.rho_f_min)] {
            let Some(b) = stats else { continue };
            let outliers = b.outliers.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
            w.write_record([
                group_label(s),
                s.weight.to_string(),
                metric.to_string(),
                b.n.to_string(),
                b.q1.to_string(),
                b.median.to_string(),
                b.q3.to_string(),
                b.whisker_low.to_string(),
                b.whisker_high.to_string(),
                outliers,
            ])?;
        }
    }
    w.flush().map_err(|source| BenchError::Io {
        path: PathBuf::from("<csv>"),
        source,
    })?;
    Ok(())
}

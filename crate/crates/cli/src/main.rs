//! `wastar`: solve, verify, generate and benchmark from the command line.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;
use wastar_core::bench::{
    self, commonly_solved, load_instance_text, parse_seed_range, read_csv, solve_and_report, summarize,
    write_boxplot_csv, write_csv, write_summary_csv, ExperimentConfig, GroupBy, HeuristicKind, Problem,
};
use wastar_core::bounds::{make_report, BoundReport};
use wastar_core::domains::{generate_instance, DomainKind, ExplicitGraph};
use wastar_core::oracle::{self, check_admissible, check_consistent, Verdict};
use wastar_core::{Limits, SearchOptions, SearchStatus, StateSpace, Weight};

const EXIT_USAGE: u8 = 1;
const EXIT_FAILURE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "wastar", version, about = "Weighted A* with post hoc suboptimality bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and report its bounds.
    Solve(SolveArgs),
    /// Run a configured sweep and write the result CSV.
    Experiment(ExperimentArgs),
    /// Summarise a result CSV per weight.
    Stats(StatsArgs),
    /// Check a graph's heuristic against exact costs-to-go.
    Verify(VerifyArgs),
    /// Write seeded random instances to a file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    domain: DomainKind,
    /// Defaults to the domain's standard heuristic.
    #[arg(long)]
    heuristic: Option<HeuristicKind>,
    /// Instance file, or inline instance text (`;` separates lines).
    #[arg(long)]
    instance: String,
    /// Which instance to solve when the file holds several.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    weight: f64,
    /// Never reopen closed states.
    #[arg(long)]
    no_reopen: bool,
    /// Compute C* and report suboptimality and rho.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    max_expansions: Option<u64>,
    #[arg(long)]
    max_seconds: Option<u64>,
    #[arg(long, default_value_t = bench::config::DEFAULT_ORACLE_MAX_STATES)]
    oracle_max_states: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; overrides the config file.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// `W` or `W,heuristic`.
    #[arg(long, default_value = "W")]
    group_by: GroupBy,
    /// Keep only instances solved under every weight.
    #[arg(long)]
    common: bool,
    /// Also write boxplot data to this CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    check: Check,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Check {
    Admissible,
    Consistent,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    domain: DomainKind,
    /// Pancake count, board width or city count.
    #[arg(long)]
    size: usize,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_seed_range)]
    seeds: std::ops::RangeInclusive<u64>,
    #[arg(long)]
    out: PathBuf,
}

/// Machine-readable `solve` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub domain: String,
    pub heuristic: String,
    pub instance_id: String,
    #[serde(rename = "W")]
    pub weight: f64,
    #[serde(rename = "C")]
    pub cost: f64,
    pub path_length: usize,
    pub expansions: u64,
    pub iterations: u64,
    pub generated: u64,
    #[serde(rename = "F")]
    pub f_w_max: f64,
    #[serde(rename = "g_min_at_F")]
    pub g_min_at_f: f64,
    pub f_min_final: f64,
    pub combined_max: f64,
    pub w_bound: f64,
    #[serde(rename = "F_bound")]
    pub f_max_bound: f64,
    #[serde(rename = "F_bound_combined")]
    pub f_max_bound_combined: f64,
    #[serde(rename = "f_bound")]
    pub f_min_bound: f64,
    #[serde(rename = "C_star")]
    pub optimal_cost: Option<f64>,
    pub subopt: Option<f64>,
    #[serde(rename = "rho_F")]
    pub rho_f_max: Option<f64>,
    #[serde(rename = "rho_f")]
    pub rho_f_min: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(a).map(|()| 0),
        Command::Experiment(a) => experiment(a).map(|()| 0),
        Command::Stats(a) => stats(a).map(|()| 0),
        Command::Verify(a) => verify(a),
        Command::Generate(a) => generate(a).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn solve(a: SolveArgs) -> Result<()> {
    let heuristic = a.heuristic.unwrap_or(HeuristicKind::default_for(a.domain));
    if !heuristic.supports(a.domain) {
        bail!("heuristic {heuristic} does not apply to domain {}", a.domain);
    }
    let path = Path::new(&a.instance);
    let (text, origin) = if path.is_file() {
        (read(path)?, path.to_path_buf())
    } else {
        (a.instance.replace(';', "\n"), PathBuf::from("inline"))
    };
    let mut instances = load_instance_text(a.domain, heuristic, &text, &origin)?;
    if instances.is_empty() {
        bail!("{} holds no instance", origin.display());
    }
    if a.index >= instances.len() {
        bail!("--index {} out of range ({} instances)", a.index, instances.len());
    }
    let inst = instances.swap_remove(a.index);
    let weight = Weight::new(a.weight)?;
    let limits = Limits {
        max_expansions: a.max_expansions,
        max_time: a.max_seconds.map(Duration::from_secs),
    };
    let options = SearchOptions {
        reopening: !a.no_reopen,
        audit_open: false,
    };
    let ctx = SolveContext {
        domain: a.domain.name(),
        heuristic: heuristic.to_string(),
        instance_id: inst.id.clone(),
        weight,
        limits,
        options,
        oracle_max_states: a.oracle.then_some(a.oracle_max_states),
    };
    let report = match &inst.problem {
        Problem::Graph(p) => solve_space(p, &ctx),
        Problem::Tile(p) => solve_space(p, &ctx),
        Problem::Pancake(p) => solve_space(p, &ctx),
        Problem::Routing(p) => solve_space(p, &ctx),
    }?;
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        print_human(&mut out, &report)?;
    }
    Ok(())
}

struct SolveContext<'a> {
    domain: &'a str,
    heuristic: String,
    instance_id: String,
    weight: Weight<f64>,
    limits: Limits,
    options: SearchOptions,
    oracle_max_states: Option<u64>,
}

fn solve_space<M: StateSpace<Cost = f64>>(space: &M, ctx: &SolveContext<'_>) -> Result<SolveReport> {
    let optimal = match ctx.oracle_max_states {
        Some(n) => Some(
            oracle::optimal_cost(space, Limits::expansions(n))
                .context("oracle failed")?
                .optimal_cost,
        ),
        None => None,
    };
    let (result, report) = solve_and_report(space, ctx.weight, ctx.limits, ctx.options, optimal)?;
    match result.status {
        SearchStatus::Solved => {}
        SearchStatus::Exhausted => bail!("no solution: the reachable space holds no goal"),
        SearchStatus::ResourceLimit => bail!("no solution within the limits ({} expansions)", result.expansions),
    }
    let bounds: BoundReport<f64> = match report.expect("solved runs carry a report") {
        Ok(r) => r,
        Err(e) => {
            eprintln!("warning: {e}; rho omitted");
            let mut r = make_report(&result, ctx.weight, None)?;
            r.optimal_cost = optimal;
            r.subopt = optimal.filter(|c| *c > 0.0).map(|c| r.cost / c);
            r
        }
    };
    let t = &result.trace;
    Ok(SolveReport {
        domain: ctx.domain.to_string(),
        heuristic: ctx.heuristic.clone(),
        instance_id: ctx.instance_id.clone(),
        weight: ctx.weight.get(),
        cost: bounds.cost,
        path_length: result.path.len().saturating_sub(1),
        expansions: result.expansions,
        iterations: result.iterations,
        generated: result.generated,
        f_w_max: t.f_w_max,
        g_min_at_f: t.g_min_at_f,
        f_min_final: t.f_min_final.expect("solved runs record f_min"),
        combined_max: t.combined_max,
        w_bound: bounds.w_bound,
        f_max_bound: bounds.f_max_bound,
        f_max_bound_combined: bounds.f_max_bound_combined,
        f_min_bound: bounds.f_min_bound,
        optimal_cost: bounds.optimal_cost,
        subopt: bounds.subopt,
        rho_f_max: bounds.rho_f_max,
        rho_f_min: bounds.rho_f_min,
    })
}

fn print_human(out: &mut impl Write, r: &SolveReport) -> io::Result<()> {
    writeln!(
        out,
        "instance          {} ({} / {})",
        r.instance_id, r.domain, r.heuristic
    )?;
    writeln!(out, "W                 {}", r.weight)?;
    writeln!(out, "C                 {}", r.cost)?;
    writeln!(out, "path length       {}", r.path_length)?;
    writeln!(out, "expansions        {}", r.expansions)?;
    writeln!(out, "iterations        {}", r.iterations)?;
    writeln!(out, "F                 {}", r.f_w_max)?;
    writeln!(out, "g_min at F        {}", r.g_min_at_f)?;
    writeln!(out, "f_min final       {}", r.f_min_final)?;
    writeln!(out, "W bound           {:.6}", r.w_bound)?;
    writeln!(out, "F bound           {:.6}", r.f_max_bound)?;
    writeln!(out, "F bound combined  {:.6}", r.f_max_bound_combined)?;
    writeln!(out, "f bound           {:.6}", r.f_min_bound)?;
    if let Some(c) = r.optimal_cost {
        writeln!(out, "C*                {c}")?;
    }
    if let Some(s) = r.subopt {
        writeln!(out, "C/C*              {s:.6}")?;
    }
    if let Some(v) = r.rho_f_max {
        writeln!(out, "rho F bound       {v:.6}")?;
    }
    if let Some(v) = r.rho_f_min {
        writeln!(out, "rho f bound       {v:.6}")?;
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let text = read(&a.config)?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let mut config = ExperimentConfig::parse(&text, base).map_err(|e| anyhow::anyhow!("{}:{e}", a.config.display()))?;
    if let Some(jobs) = a.jobs {
        config.jobs = jobs;
    }
    let records = bench::run_experiment(&config)?;
    let file = fs::File::create(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    write_csv(&records, io::BufWriter::new(file))?;
    let solved = records.iter().filter(|r| r.solved).count();
    eprintln!(
        "{} runs ({solved} solved) written to {}",
        records.len(),
        a.out.display()
    );
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    let file = fs::File::open(&a.input).with_context(|| format!("cannot read {}", a.input.display()))?;
    let mut records = read_csv(io::BufReader::new(file)).with_context(|| a.input.display().to_string())?;
    if a.common {
        records = commonly_solved(&records);
    }
    let summaries = summarize(&records, a.group_by);
    write_summary_csv(&summaries, io::stdout().lock())?;
    if let Some(out) = &a.out {
        let file = fs::File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
        write_boxplot_csv(&summaries, io::BufWriter::new(file))?;
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let text = read(&a.instance)?;
    let graph = ExplicitGraph::<f64>::parse(&text).map_err(|e| anyhow::anyhow!("{}:{e}", a.instance.display()))?;
    let limit = graph.len() + 1;
    let lines: Vec<String> = match a.check {
        Check::Admissible => match check_admissible(&graph, limit) {
            Verdict::Ok => Vec::new(),
            Verdict::Violations(vs) => vs
                .iter()
                .map(|v| format!("node {}: h = {} > h* = {}", graph.name(v.state), v.h, v.h_star))
                .collect(),
            Verdict::Unverifiable { reason } => bail!("cannot verify: {reason}"),
        },
        Check::Consistent => match check_consistent(&graph, limit) {
            Verdict::Ok => Vec::new(),
            Verdict::Violations(vs) => vs
                .iter()
                .map(|v| {
                    format!(
                        "edge ({}, {}): h = {} > cost {} + h = {}",
                        graph.name(v.from),
                        graph.name(v.to),
                        v.h_from,
                        v.cost,
                        v.h_to
                    )
                })
                .collect(),
            Verdict::Unverifiable { reason } => bail!("cannot verify: {reason}"),
        },
    };
    let what = match a.check {
        Check::Admissible => "admissible",
        Check::Consistent => "consistent",
    };
    if lines.is_empty() {
        println!("ok: heuristic is {what}");
        return Ok(0);
    }
    println!("violation: heuristic is not {what}");
    for l in lines {
        println!("  {l}");
    }
    Ok(EXIT_VIOLATION)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let mut text = String::new();
    for seed in a.seeds {
        let inst = generate_instance(a.domain, a.size, seed).map_err(anyhow::Error::msg)?;
        text.push_str(&inst.to_text());
    }
    fs::write(&a.out, text).with_context(|| format!("cannot write {}", a.out.display()))?;
    Ok(())
}

//! Command-line front end shared by the `netforge` binary and the tests.
//!
//! Every command except `sweep` prints one JSON document with the fields
//! `command`, `inputs`, `result` and `witnesses`. Reals carry nine decimals.
//!
//! Exit codes: 0 ok, 1 a claim failed under `--strict`, 2 invalid input,
//! 3 an enumeration cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::claims::verify_claims;
use crate::equilibrium::{
    best_response, best_response_dynamics, enumerate_nash, is_nash_with, DynamicsOrder, NashConcept, NashMode,
};
use crate::error::{Error, Result};
use crate::fixed::Fixed9;
use crate::game::{player_costs, social_cost_owned, social_cost_profile, CostVector, OwnedGraph};
use crate::io::{load_alphas, load_profile, parse_alphas_inline, parse_profile_arg};
use crate::optimum::{price_ratios, social_optimum};
use crate::sweep::{run_sweep, write_csv, AlphaSource, AlphaSpec, Checks, SweepConfig};
use crate::{Limits, StrategyProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "netforge", version, about = "Network creation games with per-player link prices")]
struct Cli {
    /// Worker threads for exhaustive searches.
    #[arg(long, global = true, env = "NETFORGE_WORKERS")]
    workers: Option<usize>,

    /// Largest n for a single best response.
    #[arg(long, global = true, default_value_t = 12)]
    max_br_n: usize,

    /// Largest n for equilibrium enumeration.
    #[arg(long, global = true, default_value_t = 5)]
    max_nash_n: usize,

    /// Largest n for the optimum search.
    #[arg(long, global = true, default_value_t = 7)]
    max_optimum_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AlphaArgs {
    /// Comma-separated prices, e.g. 0.5,1,3.
    #[arg(long, conflicts_with = "alphas_file", required_unless_present = "alphas_file")]
    alphas: Option<String>,

    /// JSON array of prices.
    #[arg(long)]
    alphas_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ProfileArgs {
    /// complete, empty, star:<center>, clique-star:<threshold>, or inline JSON.
    #[arg(long, conflicts_with = "profile_file")]
    profile: Option<String>,

    /// JSON array of index arrays.
    #[arg(long)]
    profile_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Also write the result document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Local,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OrderArg {
    RoundRobin,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Player costs and social cost of a profile.
    Cost {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        player: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check whether a profile is a Nash equilibrium.
    NashCheck {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Require every other strategy to be strictly worse.
        #[arg(long)]
        strict_ne: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Best response of one player.
    BestResponse {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long)]
        player: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Best-response dynamics from a starting profile (default: empty).
    Dynamics {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_enum, default_value = "round-robin")]
        order: OrderArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_rounds: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Every Nash equilibrium profile.
    EnumerateNash {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive social optimum.
    Optimum {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Price of anarchy and price of stability.
    Ratios {
        #[command(flatten)]
        alphas: AlphaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verdicts for every case claim at one ascending price vector.
    VerifyClaims {
        #[command(flatten)]
        alphas: AlphaArgs,
        /// Exit 1 if an applicable claim fails.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Claims and ratios over a grid or a seeded sample of price vectors.
    Sweep {
        #[arg(long)]
        n: usize,
        /// One spec for every player: 1.5, 0.5,1,2 or 0.5:3.0:0.5.
        #[arg(long, conflicts_with_all = ["alpha_spec", "samples"])]
        alpha_grid: Option<String>,
        /// Per-player specs separated by ';'.
        #[arg(long, conflicts_with = "samples")]
        alpha_spec: Option<String>,
        /// Draw this many vectors uniformly from --alpha-range.
        #[arg(long, requires = "alpha_range")]
        samples: Option<usize>,
        /// low:high for sampling.
        #[arg(long)]
        alpha_range: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// claims, ratios, or claims,ratios.
        #[arg(long, default_value = "claims")]
        check: String,
        /// Keep vectors as generated instead of ascending only.
        #[arg(long)]
        no_ascending: bool,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON run record destination.
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_command<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Capacity { .. } => EXIT_CAPACITY,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn workers(cli: &Cli) -> usize {
    cli.workers
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        best_response: cli.max_br_n,
        enumerate_nash: cli.max_nash_n,
        optimum: cli.max_optimum_n,
    }
}

fn load_costs(a: &AlphaArgs) -> Result<CostVector> {
    match (&a.alphas, &a.alphas_file) {
        (Some(text), _) => parse_alphas_inline(text),
        (None, Some(path)) => load_alphas(path),
        (None, None) => Err(Error::invalid("give --alphas or --alphas-file")),
    }
}

fn load_profile_args(p: &ProfileArgs, costs: &CostVector, default: Option<&str>) -> Result<StrategyProfile> {
    let profile = match (&p.profile, &p.profile_file, default) {
        (Some(arg), _, _) => parse_profile_arg(arg, costs)?,
        (None, Some(path), _) => load_profile(path)?,
        (None, None, Some(arg)) => parse_profile_arg(arg, costs)?,
        (None, None, None) => return Err(Error::invalid("give --profile or --profile-file")),
    };
    costs.check_n(profile.n(), "profile")?;
    Ok(profile)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn alphas_value(costs: &CostVector) -> Value {
    to_value(&costs.as_slice().iter().copied().map(Fixed9).collect::<Vec<_>>())
}

fn emit(stdout: &mut dyn Write, out: &OutArgs, command: &str, inputs: Value, result: Value, witnesses: Value) -> Result<()> {
    let doc = json!({
        "command": command,
        "inputs": inputs,
        "result": result,
        "witnesses": witnesses,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json value") + "\n";
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::invalid(format!("stdout: {e}")))?;
    if let Some(path) = &out.out {
        std::fs::write(path, &text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let limits = limits(cli);
    let workers = workers(cli);
    match &cli.command {
        Command::Cost { alphas, profile, player, out } => {
            let costs = load_costs(alphas)?;
            let profile = load_profile_args(profile, &costs, None)?;
            let per_player = player_costs(&profile, &costs)?;
            let owned = OwnedGraph::cheapest_owner(&profile.induced_graph(), &costs)?;
            let mut result = json!({
                "player_costs": to_value(&per_player),
                "social_cost": to_value(&social_cost_profile(&profile, &costs)?),
                "social_cost_cheapest_owner": to_value(&social_cost_owned(&owned, &costs)?),
                "edges": owned.edge_count(),
                "purchases": profile.total_purchases(),
            });
            if let Some(i) = *player {
                let c = crate::game::player_cost(&profile, &costs, i)?;
                result["player"] = json!(i);
                result["player_cost"] = to_value(&c);
            }
            let inputs = json!({ "alphas": alphas_value(&costs), "profile": to_value(&profile) });
            emit(stdout, out, "cost", inputs, result, json!([]))?;
        }
        Command::NashCheck { alphas, profile, mode, strict_ne, out } => {
            let costs = load_costs(alphas)?;
            let profile = load_profile_args(profile, &costs, None)?;
            let mode = match mode {
                ModeArg::Exact => NashMode::Exact,
                ModeArg::Local => NashMode::Local,
            };
            let concept = if *strict_ne { NashConcept::Strict } else { NashConcept::Weak };
            let report = is_nash_with(&profile, &costs, mode, concept, &limits)?;
            let inputs = json!({ "alphas": alphas_value(&costs), "profile": to_value(&profile) });
            let result = json!({ "is_nash": report.is_nash, "mode": to_value(&report.mode), "concept": to_value(&report.concept) });
            let witnesses = to_value(&report.witness.iter().collect::<Vec<_>>());
            emit(stdout, out, "nash-check", inputs, result, witnesses)?;
        }
        Command::BestResponse { alphas, profile, player, out } => {
            let costs = load_costs(alphas)?;
            let profile = load_profile_args(profile, &costs, None)?;
            let (strategy, cost) = best_response(&profile, &costs, *player, &limits)?;
            let current = crate::game::player_cost(&profile, &costs, *player)?;
            let inputs = json!({ "alphas": alphas_value(&costs), "profile": to_value(&profile), "player": player });
            let result = json!({
                "player": player,
                "strategy": to_value(&strategy),
                "cost": to_value(&cost),
                "current_cost": to_value(&current),
                "improves": cost.improves_on(current),
            });
            emit(stdout, out, "best-response", inputs, result, json!([]))?;
        }
        Command::Dynamics { alphas, profile, order, seed, max_rounds, out } => {
            let costs = load_costs(alphas)?;
            let initial = load_profile_args(profile, &costs, Some("empty"))?;
            let order = match order {
                OrderArg::RoundRobin => DynamicsOrder::RoundRobin,
                OrderArg::Random => DynamicsOrder::Random { seed: *seed },
            };
            let outcome = best_response_dynamics(&initial, &costs, order, *max_rounds, &limits)?;
            let inputs = json!({
                "alphas": alphas_value(&costs),
                "profile": to_value(&initial),
                "order": to_value(&order),
                "max_rounds": max_rounds,
            });
            let result = json!({
                "final_profile": to_value(&outcome.profile),
                "converged": outcome.converged,
                "rounds": outcome.rounds,
                "updates": outcome.updates,
                "social_cost": to_value(&social_cost_profile(&outcome.profile, &costs)?),
            });
            emit(stdout, out, "dynamics", inputs, result, json!([]))?;
        }
        Command::EnumerateNash { alphas, out } => {
            let costs = load_costs(alphas)?;
            let equilibria = enumerate_nash(&costs, &limits, workers)?;
            let listed = equilibria
                .iter()
                .map(|p| Ok(json!({ "profile": to_value(p), "social_cost": to_value(&social_cost_profile(p, &costs)?) })))
                .collect::<Result<Vec<_>>>()?;
            let result = json!({ "count": equilibria.len(), "equilibria": listed });
            emit(stdout, out, "enumerate-nash", json!({ "alphas": alphas_value(&costs) }), result, json!([]))?;
        }
        Command::Optimum { alphas, out } => {
            let costs = load_costs(alphas)?;
            let report = social_optimum(&costs, &limits, workers)?;
            let result = json!({
                "optimal_cost": to_value(&report.optimal_cost),
                "graphs_searched": report.graphs_searched,
                "connected_graphs": report.connected_graphs,
                "minimizer_count": report.optimal_graphs.len(),
                "minimizers": to_value(&report.optimal_graphs),
            });
            emit(stdout, out, "optimum", json!({ "alphas": alphas_value(&costs) }), result, json!([]))?;
        }
        Command::Ratios { alphas, out } => {
            let costs = load_costs(alphas)?;
            let report = price_ratios(&costs, &limits, workers)?;
            emit(stdout, out, "ratios", json!({ "alphas": alphas_value(&costs) }), to_value(&report), json!([]))?;
        }
        Command::VerifyClaims { alphas, strict, out } => {
            let costs = load_costs(alphas)?;
            let verdicts = verify_claims(&costs, &limits, workers)?;
            let failed = verdicts.iter().filter(|v| v.failed()).count();
            let witnesses: Vec<Value> = verdicts
                .iter()
                .filter_map(|v| v.witness.as_ref().map(|w| json!({ "claim": v.claim.as_str(), "witness": to_value(w) })))
                .collect();
            let result = json!({ "verdicts": to_value(&verdicts), "failed": failed });
            emit(stdout, out, "verify-claims", json!({ "alphas": alphas_value(&costs) }), result, Value::Array(witnesses))?;
            if *strict && failed > 0 {
                return Ok(EXIT_CLAIM_FAILED);
            }
        }
        Command::Sweep {
            n,
            alpha_grid,
            alpha_spec,
            samples,
            alpha_range,
            seed,
            check,
            no_ascending,
            out,
            record,
            strict,
        } => {
            let source = match (alpha_grid, alpha_spec, samples) {
                (Some(g), None, None) => AlphaSource::Grid { players: vec![g.parse()?] },
                (None, Some(s), None) => AlphaSource::Grid {
                    players: s.split(';').map(str::parse::<AlphaSpec>).collect::<Result<_>>()?,
                },
                (None, None, Some(count)) => {
                    let range = alpha_range.as_deref().unwrap_or_default();
                    let (lo, hi) = range
                        .split_once(':')
                        .ok_or_else(|| Error::invalid(format!("--alpha-range {range:?} must be low:high")))?;
                    let parse = |t: &str| {
                        t.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite() && *v >= 0.0)
                            .ok_or_else(|| Error::invalid(format!("bad price {t:?} in --alpha-range")))
                    };
                    AlphaSource::Sample {
                        low: Fixed9(parse(lo)?),
                        high: Fixed9(parse(hi)?),
                        count: *count,
                    }
                }
                _ => return Err(Error::invalid("give exactly one of --alpha-grid, --alpha-spec, --samples")),
            };
            let config = SweepConfig {
                n: *n,
                source,
                seed: *seed,
                ascending: !no_ascending,
                checks: check.parse::<Checks>()?,
                limits,
            };
            let run = run_sweep(&config, workers)?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(path)
                        .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
                    write_csv(&run, std::io::BufWriter::new(file))?;
                    let summary = json!({
                        "command": "sweep",
                        "inputs": to_value(&run.config),
                        "result": {
                            "instances": run.instances.len(),
                            "failed_verdicts": run.failures(),
                            "csv": path.display().to_string(),
                        },
                        "witnesses": [],
                    });
                    let text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
                    stdout
                        .write_all(text.as_bytes())
                        .map_err(|e| Error::invalid(format!("stdout: {e}")))?;
                }
                None => write_csv(&run, &mut *stdout)?,
            }
            if let Some(path) = record {
                let text = serde_json::to_string_pretty(&run).expect("json") + "\n";
                std::fs::write(path, text)
                    .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            if *strict && run.failures() > 0 {
                return Ok(EXIT_CLAIM_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

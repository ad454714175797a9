//! Price-vector sweeps: grids or seeded samples of price vectors, claim
//! verdicts and price ratios per vector, CSV rows and a JSON run record.
//!
//! Everything except `wall_time_ms` and `timestamp` in a [`RunRecord`] is a
//! pure function of the [`SweepConfig`], and the CSV carries neither.

use std::io::Write;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::claims::{verify_claims, ClaimVerdict};
use crate::equilibrium::enumerate_nash;
use crate::error::{Error, Result};
use crate::fixed::{format_fixed, Fixed9};
use crate::game::{Cost, CostVector};
use crate::optimum::{ratios_from, social_optimum, RatioReport};
use crate::parallel::map_chunks;
use crate::Limits;

/// Largest number of price vectors a sweep will generate.
pub const MAX_INSTANCES: usize = 1_000_000;

/// Values one player's price ranges over.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    Fixed(f64),
    List(Vec<f64>),
    /// `start, start + step, ..` up to and including `end`.
    Range { start: f64, end: f64, step: f64 },
}

impl AlphaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AlphaSpec::Fixed(a) => vec![*a],
            AlphaSpec::List(v) => v.clone(),
            AlphaSpec::Range { start, end, step } => {
                let mut out = Vec::new();
                let mut k = 0u32;
                loop {
                    // Snap to the nearest 12-decimal value so 0.1-style steps
                    // land on the same doubles as the literals.
                    let v = round12(start + f64::from(k) * step);
                    if v > end + 1e-9 {
                        break;
                    }
                    out.push(v);
                    k += 1;
                }
                out
            }
        }
    }
}

fn round12(v: f64) -> f64 {
    format!("{v:.12}").parse().expect("formatted float")
}

impl FromStr for AlphaSpec {
    type Err = Error;

    /// `0.5`, `0.5,1,2` or `0.5:3.0:0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| Error::invalid(format!("bad price {t:?} in {s:?}")))
        };
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::invalid(format!("range {s:?} must be start:end:step")));
            }
            let (start, end, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step <= 0.0 || end < start {
                return Err(Error::invalid(format!("range {s:?} needs step > 0 and end >= start")));
            }
            Ok(AlphaSpec::Range { start, end, step })
        } else if s.contains(',') {
            Ok(AlphaSpec::List(s.split(',').map(num).collect::<Result<_>>()?))
        } else {
            Ok(AlphaSpec::Fixed(num(s)?))
        }
    }
}

impl Serialize for AlphaSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = match self {
            AlphaSpec::Fixed(a) => format_fixed(*a),
            AlphaSpec::List(v) => v.iter().map(|&a| format_fixed(a)).collect::<Vec<_>>().join(","),
            AlphaSpec::Range { start, end, step } => {
                format!("{}:{}:{}", format_fixed(*start), format_fixed(*end), format_fixed(*step))
            }
        };
        s.serialize_str(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum AlphaSource {
    /// Cartesian product of per-player specs.
    Grid { players: Vec<AlphaSpec> },
    /// Independent uniform draws in `[low, high]`.
    Sample {
        low: Fixed9,
        high: Fixed9,
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub claims: bool,
    pub ratios: bool,
}

impl FromStr for Checks {
    type Err = Error;

    /// Comma list of `claims`, `ratios`, or `all`.
    fn from_str(s: &str) -> Result<Self> {
        let mut checks = Checks {
            claims: false,
            ratios: false,
        };
        for item in s.split(',').map(str::trim) {
            match item {
                "claims" => checks.claims = true,
                "ratios" => checks.ratios = true,
                "all" => checks = Checks { claims: true, ratios: true },
                other => return Err(Error::invalid(format!("unknown check {other:?}"))),
            }
        }
        Ok(checks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub source: AlphaSource,
    pub seed: u64,
    /// Grids keep only non-decreasing vectors; samples are sorted.
    pub ascending: bool,
    pub checks: Checks,
    #[serde(serialize_with = "serialize_limits")]
    pub limits: Limits,
}

fn serialize_limits<S: serde::Serializer>(l: &Limits, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Limits", 3)?;
    st.serialize_field("best_response", &l.best_response)?;
    st.serialize_field("enumerate_nash", &l.enumerate_nash)?;
    st.serialize_field("optimum", &l.optimum)?;
    st.end()
}

impl SweepConfig {
    /// Every price vector the sweep will evaluate, in a fixed order.
    pub fn instances(&self) -> Result<Vec<CostVector>> {
        if self.n == 0 {
            return Err(Error::invalid("sweep needs n >= 1"));
        }
        let vectors = match &self.source {
            AlphaSource::Grid { players } => {
                let specs: Vec<Vec<f64>> = match players.len() {
                    1 => vec![players[0].values(); self.n],
                    k if k == self.n => players.iter().map(AlphaSpec::values).collect(),
                    k => {
                        return Err(Error::invalid(format!(
                            "{k} price specs given for n = {}; give one or n",
                            self.n
                        )))
                    }
                };
                let total = specs
                    .iter()
                    .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
                    .filter(|&t| t <= MAX_INSTANCES)
                    .ok_or_else(|| Error::invalid(format!("grid exceeds {MAX_INSTANCES} vectors")))?;
                let mut out = Vec::new();
                for mut k in 0..total {
                    let mut v = vec![0.0; self.n];
                    // Last player varies fastest.
                    for (i, values) in specs.iter().enumerate().rev() {
                        v[i] = values[k % values.len()];
                        k /= values.len();
                    }
                    if !self.ascending || v.windows(2).all(|w| w[0] <= w[1]) {
                        out.push(v);
                    }
                }
                out
            }
            AlphaSource::Sample { low, high, count } => {
                if low.0 > high.0 || *count == 0 || *count > MAX_INSTANCES {
                    return Err(Error::invalid("sampling needs low <= high and 1..=1000000 samples"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..*count)
                    .map(|_| {
                        let mut v: Vec<f64> = (0..self.n).map(|_| rng.gen_range(low.0..=high.0)).collect();
                        if self.ascending {
                            v.sort_by(f64::total_cmp);
                        }
                        v
                    })
                    .collect()
            }
        };
        vectors.into_iter().map(CostVector::new).collect()
    }

    fn check_caps(&self) -> Result<()> {
        if self.checks.claims || self.checks.ratios {
            Limits::check("social optimum", self.n, self.limits.optimum)?;
        }
        if self.checks.claims {
            Limits::check("best response", self.n, self.limits.best_response)?;
        }
        if self.checks.ratios {
            Limits::check("Nash enumeration", self.n, self.limits.enumerate_nash)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub alphas: Vec<Fixed9>,
    pub verdicts: Vec<ClaimVerdict>,
    pub optimal_cost: Option<Cost>,
    pub ratios: Option<RatioReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub config: SweepConfig,
    pub instances: Vec<InstanceRecord>,
    pub wall_time_ms: u128,
    pub engine_version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunRecord {
    /// Applicable verdicts that came out false.
    pub fn failures(&self) -> usize {
        self.instances
            .iter()
            .flat_map(|r| &r.verdicts)
            .filter(|v| v.failed())
            .count()
    }
}

fn run_instance(costs: &CostVector, config: &SweepConfig) -> Result<InstanceRecord> {
    let alphas = costs.as_slice().iter().copied().map(Fixed9).collect();
    let mut record = InstanceRecord {
        alphas,
        verdicts: Vec::new(),
        optimal_cost: None,
        ratios: None,
        error: None,
    };
    if config.checks.claims {
        if let Err(e) = costs.ensure_ascending() {
            record.error = Some(e.to_string());
        } else {
            record.verdicts = verify_claims(costs, &config.limits, 1)?;
        }
    }
    if config.checks.claims || config.checks.ratios {
        let optimum = social_optimum(costs, &config.limits, 1)?;
        record.optimal_cost = Some(optimum.optimal_cost);
        if config.checks.ratios {
            let equilibria = enumerate_nash(costs, &config.limits, 1)?;
            record.ratios = Some(ratios_from(&equilibria, costs, optimum.optimal_cost)?);
        }
    }
    Ok(record)
}

/// Evaluates every instance, spread over `workers` threads. Instance order
/// follows [`SweepConfig::instances`] whatever the worker count.
pub fn run_sweep(config: &SweepConfig, workers: usize) -> Result<RunRecord> {
    config.check_caps()?;
    let started = Instant::now();
    let vectors = config.instances()?;
    let results = map_chunks(vectors.len() as u64, workers, |k| run_instance(&vectors[k as usize], config));
    let instances = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RunRecord {
        config: config.clone(),
        instances,
        wall_time_ms: started.elapsed().as_millis(),
        engine_version: env!("CARGO_PKG_VERSION"),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

fn cost_cell(c: Option<Cost>) -> String {
    match c {
        Some(c) => c.to_string(),
        None => String::new(),
    }
}

fn ratio_cell(r: Option<f64>) -> String {
    r.map(format_fixed).unwrap_or_default()
}

/// One row per (price vector, claim); one row per vector when only ratios
/// were requested or the vector could not be checked.
pub fn write_csv<W: Write>(record: &RunRecord, out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::invalid(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let n = record.config.n;
    let mut header: Vec<String> = (0..n).map(|i| format!("alpha_{i}")).collect();
    header.extend(
        [
            "claim_id",
            "applicable",
            "holds",
            "witness_summary",
            "social_cost",
            "optimal_cost",
            "poa",
            "pos",
        ]
        .map(String::from),
    );
    w.write_record(&header).map_err(csv_err)?;
    for inst in &record.instances {
        let alphas: Vec<String> = inst.alphas.iter().map(|a| format_fixed(a.0)).collect();
        let poa = ratio_cell(inst.ratios.as_ref().and_then(|r| r.poa));
        let pos = ratio_cell(inst.ratios.as_ref().and_then(|r| r.pos));
        let optimal = cost_cell(inst.optimal_cost);
        let mut row = |claim: String, applicable: String, holds: String, witness: String, social: String| {
            let mut cells = alphas.clone();
            cells.extend([claim, applicable, holds, witness, social, optimal.clone(), poa.clone(), pos.clone()]);
            w.write_record(&cells)
        };
        if inst.verdicts.is_empty() {
            let note = inst.error.clone().map(|e| format!("error: {e}")).unwrap_or_default();
            row("-".into(), "false".into(), String::new(), note, String::new()).map_err(csv_err)?;
            continue;
        }
        for v in &inst.verdicts {
            row(
                v.claim.to_string(),
                v.applicable.to_string(),
                v.holds.map(|h| h.to_string()).unwrap_or_default(),
                v.witness.as_ref().map(|x| x.summary()).unwrap_or_default(),
                cost_cell(v.subject_cost),
            )
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Error::invalid(format!("csv output: {e}")))?;
    Ok(())
}

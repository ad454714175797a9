//! Flat-file formats.
//!
//! * alphas: a JSON array of non-negative decimals, `[0.5, 1.0, 3]`.
//! * profile: a JSON array of index arrays, `[[1, 2], [2], []]`, where list
//!   `i` holds the 0-based players that player `i` buys edges to.
//!
//! Parse errors carry the line and column, or the offending field.

use std::fs;
use std::path::Path;

use crate::claims::{clique_star_profile, complete_profile, star_profile};
use crate::error::{Error, Result};
use crate::game::CostVector;
use crate::graph::StrategyProfile;

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::invalid(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn parse_alphas(text: &str) -> Result<CostVector> {
    let raw: Vec<serde_json::Number> = serde_json::from_str(text).map_err(|e| json_error("alphas", e))?;
    // Parse each literal with the standard library so decimals round-trip exactly.
    let raw = raw
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.to_string()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("alphas[{i}]: {n}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    CostVector::new(raw)
}

/// Comma-separated decimals, as typed on a command line.
pub fn parse_alphas_inline(text: &str) -> Result<CostVector> {
    let raw = text
        .split(',')
        .enumerate()
        .map(|(i, item)| {
            item.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("alphas[{i}]: {:?}: {e}", item.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    CostVector::new(raw)
}

pub fn load_alphas(path: &Path) -> Result<CostVector> {
    parse_alphas(&read(path)?).map_err(|e| prefix(path, e))
}

pub fn alphas_to_string(costs: &CostVector) -> String {
    // Shortest round-trip representation, not the fixed output format.
    serde_json::to_string(costs.as_slice()).expect("plain floats") + "\n"
}

pub fn save_alphas(path: &Path, costs: &CostVector) -> Result<()> {
    write(path, &alphas_to_string(costs))
}

pub fn parse_profile(text: &str) -> Result<StrategyProfile> {
    let raw: Vec<Vec<usize>> = serde_json::from_str(text).map_err(|e| json_error("profile", e))?;
    StrategyProfile::new(raw)
}

pub fn load_profile(path: &Path) -> Result<StrategyProfile> {
    parse_profile(&read(path)?).map_err(|e| prefix(path, e))
}

pub fn profile_to_string(profile: &StrategyProfile) -> String {
    serde_json::to_string(&profile.to_lists()).expect("index lists") + "\n"
}

pub fn save_profile(path: &Path, profile: &StrategyProfile) -> Result<()> {
    write(path, &profile_to_string(profile))
}

/// A named profile (`complete`, `empty`, `star:<center>`,
/// `clique-star:<threshold>`) or an inline JSON profile.
pub fn parse_profile_arg(arg: &str, costs: &CostVector) -> Result<StrategyProfile> {
    let n = costs.n();
    let arg = arg.trim();
    let profile = match arg.split_once(':') {
        None if arg == "complete" => complete_profile(n),
        None if arg == "empty" => StrategyProfile::empty(n),
        None if arg == "star" => star_profile(n, 0)?,
        Some(("star", center)) => {
            let center = center
                .parse()
                .map_err(|e| Error::invalid(format!("star center {center:?}: {e}")))?;
            star_profile(n, center)?
        }
        Some(("clique-star", threshold)) => {
            let t: f64 = threshold
                .parse()
                .map_err(|e| Error::invalid(format!("clique-star threshold {threshold:?}: {e}")))?;
            clique_star_profile(costs, t)?
        }
        _ if arg.starts_with('[') => parse_profile(arg)?,
        _ => {
            return Err(Error::invalid(format!(
                "unknown profile {arg:?}; expected complete, empty, star:<center>, clique-star:<threshold> or a JSON array"
            )))
        }
    };
    costs.check_n(profile.n(), "profile")?;
    Ok(profile)
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::invalid(format!("{}: {msg}", path.display())),
        other => other,
    }
}

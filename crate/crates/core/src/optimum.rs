//! Exhaustive social-optimum search and the price of anarchy and stability.
//!
//! The optimum ranges over connected undirected graphs with every edge billed
//! to its cheaper endpoint, which is the cheapest way to pay for any fixed
//! edge set.

use serde::Serialize;

use crate::equilibrium::enumerate_nash;
use crate::error::Result;
use crate::game::{owned_cost_from_parts, social_cost_profile, Cost, CostVector, OwnedGraph};
use crate::graph::{StrategyProfile, UndirectedGraph};
use crate::parallel::map_chunks;
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimumReport {
    pub optimal_cost: Cost,
    /// Every connected graph within epsilon of the optimum, in edge-mask order.
    pub optimal_graphs: Vec<OwnedGraph>,
    /// All `2^(n(n-1)/2)` labelled graphs, connected or not.
    pub graphs_searched: u64,
    pub connected_graphs: u64,
}

impl OptimumReport {
    pub fn every_minimizer(&self, mut pred: impl FnMut(&UndirectedGraph) -> bool) -> bool {
        self.optimal_graphs.iter().all(|g| pred(&g.graph()))
    }

    pub fn some_minimizer(&self, mut pred: impl FnMut(&UndirectedGraph) -> bool) -> bool {
        self.optimal_graphs.iter().any(|g| pred(&g.graph()))
    }

    /// First minimizer failing `pred`.
    pub fn counterexample(&self, mut pred: impl FnMut(&UndirectedGraph) -> bool) -> Option<&OwnedGraph> {
        self.optimal_graphs.iter().find(|g| !pred(&g.graph()))
    }
}

/// Pair list in edge-mask bit order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Visits every connected graph on `n` nodes with its edge mask, billed edge
/// total and social cost. Chunks run on `workers` threads; per-chunk results
/// come back in mask order.
pub(crate) fn scan_connected_graphs<T, F>(costs: &CostVector, workers: usize, visit: F) -> (Vec<T>, u64)
where
    T: Send,
    F: Fn(u64, &UndirectedGraph, Cost, &mut Vec<T>) + Sync + Send,
{
    let n = costs.n();
    let pairs = pairs(n);
    let bits = pairs.len() as u32;
    let chunk_bits = bits.min(8);
    let inner_bits = bits - chunk_bits;
    let prices: Vec<f64> = pairs
        .iter()
        .map(|&(u, v)| costs.alpha(costs.cheaper_endpoint(u, v)))
        .collect();

    let per_chunk = map_chunks(1u64 << chunk_bits, workers, |chunk| {
        let mut out = Vec::new();
        let mut connected = 0u64;
        for low in 0..1u64 << inner_bits {
            let mask = (chunk << inner_bits) | low;
            if (mask.count_ones() as usize) + 1 < n {
                continue;
            }
            let mut adjacency = vec![0u64; n];
            let mut billed = 0.0;
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    adjacency[u] |= 1u64 << v;
                    adjacency[v] |= 1u64 << u;
                    billed += prices[k];
                }
            }
            let graph = UndirectedGraph::from_adjacency(adjacency);
            let cost = owned_cost_from_parts(billed, &graph);
            if cost.is_finite() {
                connected += 1;
                visit(mask, &graph, cost, &mut out);
            }
        }
        (out, connected)
    });
    let mut all = Vec::new();
    let mut connected = 0;
    for (out, c) in per_chunk {
        all.extend(out);
        connected += c;
    }
    (all, connected)
}

/// Minimum social cost over all connected owned graphs, with every
/// minimizer within epsilon.
pub fn social_optimum(costs: &CostVector, limits: &Limits, workers: usize) -> Result<OptimumReport> {
    let n = costs.n();
    Limits::check("social optimum", n, limits.optimum)?;
    let graphs_searched = 1u64 << (n * (n - 1) / 2);
    let (candidates, connected_graphs) = scan_connected_graphs(costs, workers, |mask, _, cost, out| {
        out.push((mask, cost));
    });
    let optimal_cost = candidates
        .iter()
        .map(|&(_, c)| c)
        .min_by(|a, b| a.partial_cmp(b).expect("finite"))
        .unwrap_or(Cost::Infinite);
    let optimal_graphs = candidates
        .iter()
        .filter(|&&(_, c)| c.at_most(optimal_cost))
        .map(|&(mask, _)| {
            OwnedGraph::cheapest_owner(&UndirectedGraph::from_pair_mask(n, mask), costs)
                .expect("same n")
        })
        .collect();
    Ok(OptimumReport {
        optimal_cost,
        optimal_graphs,
        graphs_searched,
        connected_graphs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    /// Worst equilibrium cost over the optimum; `None` without equilibria.
    #[serde(serialize_with = "crate::fixed::opt_fixed")]
    pub poa: Option<f64>,
    /// Best equilibrium cost over the optimum; `None` without equilibria.
    #[serde(serialize_with = "crate::fixed::opt_fixed")]
    pub pos: Option<f64>,
    pub worst_ne_cost: Option<Cost>,
    pub best_ne_cost: Option<Cost>,
    pub optimal_cost: Cost,
    pub equilibria: usize,
    /// Both costs were zero and the ratios were set to 1.
    pub degenerate: bool,
}

/// Price of anarchy and price of stability from full equilibrium
/// enumeration and the exhaustive optimum.
pub fn price_ratios(costs: &CostVector, limits: &Limits, workers: usize) -> Result<RatioReport> {
    let equilibria = enumerate_nash(costs, limits, workers)?;
    let optimum = social_optimum(costs, limits, workers)?;
    ratios_from(&equilibria, costs, optimum.optimal_cost)
}

pub(crate) fn ratios_from(
    equilibria: &[StrategyProfile],
    costs: &CostVector,
    optimal_cost: Cost,
) -> Result<RatioReport> {
    let ne_costs = equilibria
        .iter()
        .map(|p| social_cost_profile(p, costs))
        .collect::<Result<Vec<_>>>()?;
    let cmp = |a: &Cost, b: &Cost| a.partial_cmp(b).expect("costs are never NaN");
    let worst = ne_costs.iter().copied().max_by(cmp);
    let best = ne_costs.iter().copied().min_by(cmp);
    let mut degenerate = false;
    let mut ratio = |c: Option<Cost>| {
        let c = c?;
        match (c, optimal_cost) {
            (Cost::Finite(a), Cost::Finite(b)) if a == 0.0 && b == 0.0 => {
                degenerate = true;
                Some(1.0)
            }
            _ => c.ratio(optimal_cost),
        }
    };
    let poa = ratio(worst);
    let pos = ratio(best);
    Ok(RatioReport {
        poa,
        pos,
        worst_ne_cost: worst,
        best_ne_cost: best,
        optimal_cost,
        equilibria: equilibria.len(),
        degenerate,
    })
}

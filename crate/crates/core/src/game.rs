//! Player cost, social cost and the edge-count lower bounds on social cost.
//!
//! Player `i` pays `alpha_i * |s_i|` plus the sum of its hop distances to
//! every player. A player that cannot reach everyone pays [`Cost::Infinite`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{
    check_player_count, distance_sum_from, PlayerId, StrategyProfile, UndirectedGraph,
};
use crate::fixed::Fixed9;
use crate::EPSILON;

/// Link prices `alpha_0 .. alpha_{n-1}`, one per player.
///
/// Prices are finite and non-negative. They need not be sorted; operations
/// that rely on ascending order check it themselves.
#[derive(Clone, PartialEq)]
pub struct CostVector {
    alphas: Vec<f64>,
}

impl CostVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        check_player_count(alphas.len())?;
        for (i, &a) in alphas.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::invalid(format!("alphas[{i}]: {a} is not a finite number")));
            }
            if a < 0.0 {
                return Err(Error::invalid(format!("alphas[{i}]: negative value {a}")));
            }
        }
        Ok(CostVector { alphas })
    }

    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![alpha; n])
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, i: PlayerId) -> f64 {
        self.alphas[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alphas
    }

    pub fn min(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Non-decreasing order.
    pub fn is_ascending(&self) -> bool {
        self.alphas.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn ensure_ascending(&self) -> Result<()> {
        match self.alphas.windows(2).position(|w| w[0] > w[1]) {
            None => Ok(()),
            Some(k) => Err(Error::invalid(format!(
                "alphas must be ascending: alphas[{}] = {} > alphas[{}] = {}",
                k,
                self.alphas[k],
                k + 1,
                self.alphas[k + 1]
            ))),
        }
    }

    /// Which endpoint pays for edge `{u, v}`: the smaller price, ties to the
    /// smaller index.
    pub fn cheaper_endpoint(&self, u: PlayerId, v: PlayerId) -> PlayerId {
        let (a, b) = (u.min(v), u.max(v));
        if self.alphas[b] < self.alphas[a] {
            b
        } else {
            a
        }
    }

    pub(crate) fn check_n(&self, n: usize, what: &'static str) -> Result<()> {
        if self.n() != n {
            Err(Error::DimensionMismatch {
                what,
                expected: self.n(),
                found: n,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.alphas.iter()).finish()
    }
}

impl Serialize for CostVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.alphas.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CostVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CostVector::new(Vec::<f64>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A player or social cost. Disconnection costs [`Cost::Infinite`], which
/// compares above every finite value.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Cost {
    Finite(f64),
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0.0);

    pub fn value(self) -> Option<f64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    /// `self` beats `other` by more than [`EPSILON`].
    pub fn improves_on(self, other: Cost) -> bool {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a < b - EPSILON,
            (Cost::Finite(_), Cost::Infinite) => true,
            (Cost::Infinite, _) => false,
        }
    }

    /// Equal within [`EPSILON`]; two infinite costs are equal.
    pub fn approx_eq(self, other: Cost) -> bool {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => (a - b).abs() <= EPSILON,
            (Cost::Infinite, Cost::Infinite) => true,
            _ => false,
        }
    }

    /// `self <= other + EPSILON`.
    pub fn at_most(self, other: Cost) -> bool {
        !other.improves_on(self) || self.approx_eq(other)
    }

    pub fn ratio(self, denominator: Cost) -> Option<f64> {
        match (self, denominator) {
            (Cost::Finite(a), Cost::Finite(b)) if b != 0.0 => Some(a / b),
            _ => None,
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(v) => Fixed9(*v).serialize(s),
            Cost::Infinite => s.serialize_str("inf"),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.partial_cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Some(Ordering::Less),
            (Cost::Infinite, Cost::Finite(_)) => Some(Ordering::Greater),
            (Cost::Infinite, Cost::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl std::iter::Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v:.9}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// An undirected graph in which every edge has exactly one paying owner.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OwnedGraph {
    n: usize,
    /// `(owner, other)`, sorted by the unordered pair.
    edges: Vec<(PlayerId, PlayerId)>,
}

impl OwnedGraph {
    pub fn new(n: usize, mut edges: Vec<(PlayerId, PlayerId)>) -> Result<Self> {
        check_player_count(n)?;
        edges.sort_by_key(|&(a, b)| (a.min(b), a.max(b)));
        for (k, &(owner, other)) in edges.iter().enumerate() {
            if owner >= n || other >= n {
                return Err(Error::invalid(format!(
                    "edge ({owner}, {other}) out of range for n = {n}"
                )));
            }
            if owner == other {
                return Err(Error::invalid(format!("self-loop at {owner}")));
            }
            if k > 0 {
                let (a, b) = edges[k - 1];
                if (a.min(b), a.max(b)) == (owner.min(other), owner.max(other)) {
                    return Err(Error::invalid(format!(
                        "edge {{{}, {}}} has more than one owner",
                        owner.min(other),
                        owner.max(other)
                    )));
                }
            }
        }
        Ok(OwnedGraph { n, edges })
    }

    /// Bills every edge of `graph` to its cheaper endpoint.
    pub fn cheapest_owner(graph: &UndirectedGraph, costs: &CostVector) -> Result<Self> {
        costs.check_n(graph.n(), "graph")?;
        let edges = graph
            .edges()
            .map(|(u, v)| {
                let owner = costs.cheaper_endpoint(u, v);
                (owner, if owner == u { v } else { u })
            })
            .collect();
        Ok(OwnedGraph { n: graph.n(), edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(PlayerId, PlayerId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn graph(&self) -> UndirectedGraph {
        let mut adjacency = vec![0u64; self.n];
        for &(a, b) in &self.edges {
            adjacency[a] |= 1u64 << b;
            adjacency[b] |= 1u64 << a;
        }
        UndirectedGraph::from_adjacency(adjacency)
    }

    /// The profile in which each owner buys exactly its owned edges.
    pub fn to_profile(&self) -> StrategyProfile {
        let mut sets = vec![crate::graph::PlayerSet::EMPTY; self.n];
        for &(owner, other) in &self.edges {
            sets[owner] = sets[owner].with(other);
        }
        StrategyProfile::from_sets_unchecked(sets)
    }

    /// Same graph with edge `k` billed to its other endpoint.
    pub fn with_owner_flipped(&self, k: usize) -> OwnedGraph {
        let mut edges = self.edges.clone();
        let (a, b) = edges[k];
        edges[k] = (b, a);
        OwnedGraph { n: self.n, edges }
    }
}

impl fmt::Debug for OwnedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OwnedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl fmt::Display for OwnedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (owner, other)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{owner}->{other}")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct OwnedGraphRepr {
    n: usize,
    edges: Vec<(PlayerId, PlayerId)>,
}

impl Serialize for OwnedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OwnedGraphRepr {
            n: self.n,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OwnedGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = OwnedGraphRepr::deserialize(d)?;
        OwnedGraph::new(repr.n, repr.edges).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_player(i: PlayerId, n: usize) -> Result<()> {
    if i >= n {
        Err(Error::invalid(format!("player {i} out of range for n = {n}")))
    } else {
        Ok(())
    }
}

pub(crate) fn cost_of(alpha: f64, purchases: usize, distance_sum: Option<u64>) -> Cost {
    match distance_sum {
        Some(d) => Cost::Finite(alpha * purchases as f64 + d as f64),
        None => Cost::Infinite,
    }
}

/// `alpha_i * |s_i| + sum_j d(i, j)`.
pub fn player_cost(profile: &StrategyProfile, costs: &CostVector, i: PlayerId) -> Result<Cost> {
    costs.check_n(profile.n(), "profile")?;
    check_player(i, profile.n())?;
    let adjacency = profile.adjacency();
    Ok(cost_of(
        costs.alpha(i),
        profile.purchases(i).len(),
        distance_sum_from(&adjacency, i),
    ))
}

/// Every player's cost, in player order.
pub fn player_costs(profile: &StrategyProfile, costs: &CostVector) -> Result<Vec<Cost>> {
    costs.check_n(profile.n(), "profile")?;
    let adjacency = profile.adjacency();
    Ok((0..profile.n())
        .map(|i| {
            cost_of(
                costs.alpha(i),
                profile.purchases(i).len(),
                distance_sum_from(&adjacency, i),
            )
        })
        .collect())
}

/// Sum of all player costs. Every purchase is billed, including both halves
/// of a mutual purchase; distances are summed over ordered pairs.
pub fn social_cost_profile(profile: &StrategyProfile, costs: &CostVector) -> Result<Cost> {
    Ok(player_costs(profile, costs)?.into_iter().sum())
}

/// Each edge billed once to its owner, plus the ordered-pair distance sum.
pub fn social_cost_owned(graph: &OwnedGraph, costs: &CostVector) -> Result<Cost> {
    costs.check_n(graph.n(), "owned graph")?;
    let billed: f64 = graph.edges().iter().map(|&(owner, _)| costs.alpha(owner)).sum();
    Ok(owned_cost_from_parts(billed, &graph.graph()))
}

pub(crate) fn owned_cost_from_parts(billed: f64, graph: &UndirectedGraph) -> Cost {
    let adjacency = graph.adjacency();
    let mut total = 0u64;
    for v in 0..graph.n() {
        match distance_sum_from(adjacency, v) {
            Some(d) => total += d,
            None => return Cost::Infinite,
        }
    }
    Cost::Finite(billed + total as f64)
}

fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `2n(n-1) + (alpha_min - 2) m`: every edge costs at least `alpha_min`,
/// `2m` ordered pairs sit at distance one and the rest at distance two or
/// more.
pub fn lower_bound_global(n: usize, alpha_min: f64, m: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if m > max_edges(n) {
        return Err(Error::invalid(format!(
            "edge count {m} exceeds n(n-1)/2 = {} for n = {n}",
            max_edges(n)
        )));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(2.0 * n * (n - 1.0) + (alpha_min - 2.0) * m)
}

/// `alpha_1 (n-1) + alpha_2 (m-n+1) + 2m + 2(n(n-1) - 2m)`: the cheapest
/// player can own at most `n-1` edges; the rest cost at least `alpha_2`.
pub fn lower_bound_case2_expanded(n: usize, alpha1: f64, alpha2: f64, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    alpha1 * (n - 1.0) + alpha2 * (m - n + 1.0) + 2.0 * m + 2.0 * (n * (n - 1.0) - 2.0 * m)
}

/// `alpha_1 (n-1) + (alpha_2 - 2) m - (n-1)(alpha_2 - 2n)`.
pub fn lower_bound_case2_simplified(n: usize, alpha1: f64, alpha2: f64, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    alpha1 * (n - 1.0) + (alpha2 - 2.0) * m - (n - 1.0) * (alpha2 - 2.0 * n)
}

/// Lower bound on social cost in terms of the two cheapest prices. Returns
/// the expanded form after checking the simplified form agrees with it.
pub fn lower_bound_case2(n: usize, alpha1: f64, alpha2: f64, m: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if alpha1 > alpha2 {
        return Err(Error::invalid(format!(
            "alpha1 = {alpha1} must not exceed alpha2 = {alpha2}"
        )));
    }
    if m + 1 < n {
        return Err(Error::invalid(format!(
            "edge count {m} is below n - 1 = {}",
            n - 1
        )));
    }
    if m > max_edges(n) {
        return Err(Error::invalid(format!(
            "edge count {m} exceeds n(n-1)/2 = {} for n = {n}",
            max_edges(n)
        )));
    }
    let expanded = lower_bound_case2_expanded(n, alpha1, alpha2, m);
    let simplified = lower_bound_case2_simplified(n, alpha1, alpha2, m);
    let scale = expanded.abs().max(simplified.abs()).max(1.0);
    assert!(
        (expanded - simplified).abs() <= 1e-12 * scale,
        "case-2 bound forms disagree: {expanded} vs {simplified}"
    );
    Ok(expanded)
}

//! Canonical profiles (complete graph, star, clique plus periphery) and
//! instance-by-instance adjudication of the structural case claims about
//! equilibria and optima.
//!
//! Claim verification needs prices in ascending order, so player 0 is the
//! cheapest. Unsorted input is rejected rather than relabelled.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::equilibrium::{is_nash, DeviationWitness, NashMode};
use crate::error::{Error, Result};
use crate::game::{lower_bound_case2, social_cost_owned, social_cost_profile, Cost, CostVector, OwnedGraph};
use crate::graph::{PlayerId, PlayerSet, StrategyProfile, UndirectedGraph};
use crate::optimum::{scan_connected_graphs, social_optimum, OptimumReport};
use crate::Limits;

/// Threshold for the equilibrium claims.
pub const NASH_THRESHOLD: f64 = 1.0;
/// Threshold for the optimum claims.
pub const OPTIMUM_THRESHOLD: f64 = 2.0;

/// Lower-index player buys every edge.
pub fn complete_profile(n: usize) -> StrategyProfile {
    let sets = (0..n)
        .map(|i| PlayerSet::all(n) & !PlayerSet::all(i + 1))
        .collect();
    StrategyProfile::from_sets_unchecked(sets)
}

/// Every leaf buys one edge to `center`; the center buys nothing.
pub fn star_profile(n: usize, center: PlayerId) -> Result<StrategyProfile> {
    if n == 0 || center >= n {
        return Err(Error::invalid(format!("star center {center} out of range for n = {n}")));
    }
    let sets = (0..n)
        .map(|i| if i == center { PlayerSet::EMPTY } else { PlayerSet::singleton(center) })
        .collect();
    Ok(StrategyProfile::from_sets_unchecked(sets))
}

/// How peripheral players attach to the clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliqueAttachment {
    /// Adjacent to every clique member.
    #[default]
    AllClique,
    /// One edge, to player 0.
    Single,
}

/// Number of players priced at or below a threshold, for ascending prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdSplit {
    pub j: usize,
}

impl ThresholdSplit {
    pub fn of(costs: &CostVector, threshold: f64) -> Result<Self> {
        costs.ensure_ascending()?;
        Ok(ThresholdSplit {
            j: costs.as_slice().iter().take_while(|&&a| a <= threshold).count(),
        })
    }

    /// Some players on each side of the threshold.
    pub fn is_mixed(self, n: usize) -> bool {
        self.j >= 1 && self.j < n
    }
}

/// The first `j` players (price at most `threshold`) form a clique, bought
/// low index first, and buy the edges to every peripheral player. Peripheral
/// players buy nothing. `j = 0` falls back to the star at player 0 and
/// `j = n` is the complete profile.
pub fn clique_star_profile(costs: &CostVector, threshold: f64) -> Result<StrategyProfile> {
    clique_star_profile_with(costs, threshold, CliqueAttachment::AllClique)
}

pub fn clique_star_profile_with(
    costs: &CostVector,
    threshold: f64,
    attachment: CliqueAttachment,
) -> Result<StrategyProfile> {
    let n = costs.n();
    let ThresholdSplit { j } = ThresholdSplit::of(costs, threshold)?;
    if j == 0 {
        return star_profile(n, 0);
    }
    let all = PlayerSet::all(n);
    let sets = (0..n)
        .map(|i| {
            if i >= j {
                PlayerSet::EMPTY
            } else {
                let higher = all & !PlayerSet::all(i + 1);
                match attachment {
                    CliqueAttachment::AllClique => higher,
                    CliqueAttachment::Single if i == 0 => higher,
                    CliqueAttachment::Single => higher & PlayerSet::all(j),
                }
            }
        })
        .collect();
    Ok(StrategyProfile::from_sets_unchecked(sets))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    /// All prices at most 1: the complete graph is an equilibrium.
    NeC1,
    /// All prices above 1: the star is an equilibrium.
    NeC2,
    /// Mixed around 1: the clique plus periphery is an equilibrium.
    NeC3,
    /// All prices above 2: every optimum is a star.
    OptC1,
    /// Cheapest price at most 2: the two-price lower bound holds.
    OptC2Bound,
    /// Second cheapest price below 2: the same bound holds.
    OptC3Bound,
    /// All prices below 2: the complete graph is the unique optimum.
    OptC4,
    /// Mixed around 2: every optimum is the clique plus periphery.
    OptC5,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::NeC1,
        ClaimId::NeC2,
        ClaimId::NeC3,
        ClaimId::OptC1,
        ClaimId::OptC2Bound,
        ClaimId::OptC3Bound,
        ClaimId::OptC4,
        ClaimId::OptC5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::NeC1 => "NE-C1",
            ClaimId::NeC2 => "NE-C2",
            ClaimId::NeC3 => "NE-C3",
            ClaimId::OptC1 => "OPT-C1",
            ClaimId::OptC2Bound => "OPT-C2-BOUND",
            ClaimId::OptC3Bound => "OPT-C3-BOUND",
            ClaimId::OptC4 => "OPT-C4",
            ClaimId::OptC5 => "OPT-C5",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown claim id {s:?}")))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimWitness {
    /// The construction is not an equilibrium.
    Deviation {
        profile: StrategyProfile,
        deviation: DeviationWitness,
    },
    /// A minimizer without the claimed structure, or a graph below the bound.
    Graph { graph: OwnedGraph, cost: Cost },
}

impl ClaimWitness {
    pub fn summary(&self) -> String {
        match self {
            ClaimWitness::Deviation { deviation, .. } => deviation.summary(),
            ClaimWitness::Graph { graph, cost } => format!("graph {graph} cost {cost}"),
        }
    }

    /// Re-checks the witness from scratch. `bound` is the value a graph
    /// witness must undercut, when the claim is a bound.
    pub fn revalidate(&self, costs: &CostVector, bound: Option<f64>) -> bool {
        match self {
            ClaimWitness::Deviation { profile, deviation } => {
                deviation.revalidate(profile, costs, crate::NashConcept::Weak)
            }
            ClaimWitness::Graph { graph, cost } => {
                let Ok(actual) = social_cost_owned(graph, costs) else {
                    return false;
                };
                actual.approx_eq(*cost)
                    && bound.is_none_or(|b| actual.improves_on(Cost::Finite(b)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimVerdict {
    pub claim: ClaimId,
    pub applicable: bool,
    /// `None` when not applicable.
    pub holds: Option<bool>,
    pub witness: Option<ClaimWitness>,
    /// Social cost of the claimed structure (construction profile, or the
    /// claimed optimal graph), when there is one.
    pub subject_cost: Option<Cost>,
    pub detail: String,
}

impl ClaimVerdict {
    fn not_applicable(claim: ClaimId, why: impl Into<String>) -> Self {
        ClaimVerdict {
            claim,
            applicable: false,
            holds: None,
            witness: None,
            subject_cost: None,
            detail: why.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.holds == Some(false)
    }
}

/// Runs every claim against its oracle for one ascending price vector.
///
/// Equilibrium claims check the matching construction with an exact weak Nash
/// test. Optimum claims compare against all exhaustive minimizers. Bound
/// claims compare the two-price bound with every connected owned graph.
pub fn verify_claims(costs: &CostVector, limits: &Limits, workers: usize) -> Result<Vec<ClaimVerdict>> {
    costs.ensure_ascending()?;
    let n = costs.n();
    let (lo, hi) = (costs.min(), costs.max());
    let ne_split = ThresholdSplit::of(costs, NASH_THRESHOLD)?;
    let opt_split = ThresholdSplit::of(costs, OPTIMUM_THRESHOLD)?;

    let needs_optimum = lo > OPTIMUM_THRESHOLD || hi < OPTIMUM_THRESHOLD || opt_split.is_mixed(n);
    let optimum = if needs_optimum {
        Some(social_optimum(costs, limits, workers)?)
    } else {
        None
    };

    let mut verdicts = Vec::with_capacity(ClaimId::ALL.len());

    verdicts.push(if hi <= NASH_THRESHOLD {
        nash_claim(ClaimId::NeC1, complete_profile(n), costs, limits, "complete profile")?
    } else {
        ClaimVerdict::not_applicable(ClaimId::NeC1, "max alpha > 1")
    });

    verdicts.push(if lo > NASH_THRESHOLD {
        nash_claim(ClaimId::NeC2, star_profile(n, 0)?, costs, limits, "leaf-bought star at 0")?
    } else {
        ClaimVerdict::not_applicable(ClaimId::NeC2, "min alpha <= 1")
    });

    verdicts.push(if ne_split.is_mixed(n) {
        let what = format!("clique-star with j = {}", ne_split.j);
        nash_claim(ClaimId::NeC3, clique_star_profile(costs, NASH_THRESHOLD)?, costs, limits, &what)?
    } else {
        ClaimVerdict::not_applicable(ClaimId::NeC3, format!("no split around 1 (j = {})", ne_split.j))
    });

    verdicts.push(match &optimum {
        Some(opt) if lo > OPTIMUM_THRESHOLD => structure_claim(
            ClaimId::OptC1,
            opt,
            costs,
            &star_profile(n, 0)?,
            "every minimizer is a star",
            |g| g.is_star(),
        )?,
        _ => ClaimVerdict::not_applicable(ClaimId::OptC1, "min alpha <= 2"),
    });

    verdicts.push(if n >= 2 && lo <= OPTIMUM_THRESHOLD {
        bound_claim(ClaimId::OptC2Bound, costs, limits, workers)?
    } else {
        ClaimVerdict::not_applicable(ClaimId::OptC2Bound, "needs n >= 2 and min alpha <= 2")
    });

    verdicts.push(if n >= 2 && costs.alpha(1) < OPTIMUM_THRESHOLD {
        bound_claim(ClaimId::OptC3Bound, costs, limits, workers)?
    } else {
        ClaimVerdict::not_applicable(ClaimId::OptC3Bound, "needs n >= 2 and alpha[1] < 2")
    });

    verdicts.push(match &optimum {
        // Only one graph is complete, so "every minimizer" means "unique".
        Some(opt) if hi < OPTIMUM_THRESHOLD => structure_claim(
            ClaimId::OptC4,
            opt,
            costs,
            &complete_profile(n),
            "the complete graph is the unique minimizer",
            |g| g.is_complete(),
        )?,
        _ => ClaimVerdict::not_applicable(ClaimId::OptC4, "max alpha >= 2"),
    });

    verdicts.push(match &optimum {
        Some(opt) if opt_split.is_mixed(n) => {
            let j = opt_split.j;
            structure_claim(
                ClaimId::OptC5,
                opt,
                costs,
                &clique_star_profile(costs, OPTIMUM_THRESHOLD)?,
                &format!("every minimizer contains the {j}-clique with periphery adjacent only to it"),
                |g| g.is_clique_with_periphery(j, false),
            )?
        }
        _ => ClaimVerdict::not_applicable(ClaimId::OptC5, format!("no split around 2 (j = {})", opt_split.j)),
    });

    Ok(verdicts)
}

fn nash_claim(
    claim: ClaimId,
    profile: StrategyProfile,
    costs: &CostVector,
    limits: &Limits,
    what: &str,
) -> Result<ClaimVerdict> {
    let report = is_nash(&profile, costs, NashMode::Exact, limits)?;
    let subject_cost = Some(social_cost_profile(&profile, costs)?);
    let detail = format!("{what} {profile}");
    Ok(ClaimVerdict {
        claim,
        applicable: true,
        holds: Some(report.is_nash),
        witness: report.witness.map(|deviation| ClaimWitness::Deviation { profile, deviation }),
        subject_cost,
        detail,
    })
}

fn structure_claim(
    claim: ClaimId,
    optimum: &OptimumReport,
    costs: &CostVector,
    claimed: &StrategyProfile,
    what: &str,
    pred: impl Fn(&UndirectedGraph) -> bool,
) -> Result<ClaimVerdict> {
    let claimed_graph = OwnedGraph::cheapest_owner(&claimed.induced_graph(), costs)?;
    let subject_cost = Some(social_cost_owned(&claimed_graph, costs)?);
    let counterexample = optimum.counterexample(&pred).cloned();
    let matching = optimum.optimal_graphs.iter().filter(|g| pred(&g.graph())).count();
    let detail = format!(
        "{what}; {matching} of {} minimizers match",
        optimum.optimal_graphs.len()
    );
    let witness = match counterexample {
        Some(graph) => Some(ClaimWitness::Graph {
            cost: social_cost_owned(&graph, costs)?,
            graph,
        }),
        None => None,
    };
    Ok(ClaimVerdict {
        claim,
        applicable: true,
        holds: Some(witness.is_none()),
        witness,
        subject_cost,
        detail,
    })
}

/// The two-price bound against every connected graph. A violation needs a
/// graph cheaper than the bound by more than epsilon.
fn bound_claim(claim: ClaimId, costs: &CostVector, limits: &Limits, workers: usize) -> Result<ClaimVerdict> {
    let n = costs.n();
    Limits::check("bound check", n, limits.optimum)?;
    let (a1, a2) = (costs.alpha(0), costs.alpha(1));
    let mut bounds = Vec::with_capacity(n * (n - 1) / 2 + 1);
    for m in 0..=n * (n - 1) / 2 {
        bounds.push(if m + 1 >= n { Some(lower_bound_case2(n, a1, a2, m)?) } else { None });
    }
    let (rows, checked) = scan_connected_graphs(costs, workers, |mask, graph, cost, out| {
        let m = graph.edge_count();
        let bound = bounds[m].expect("connected graphs have at least n - 1 edges");
        let slack = cost.value().expect("connected") - bound;
        out.push((slack, mask, cost, bound));
    });
    let violation = rows
        .iter()
        .find(|&&(_, _, cost, bound)| cost.improves_on(Cost::Finite(bound)));
    let tightest = rows
        .iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let detail = match tightest {
        Some((slack, _, _, _)) => format!("{checked} connected graphs checked; minimum slack {slack:.9}"),
        None => "no connected graphs".to_string(),
    };
    let witness = violation.map(|&(_, mask, cost, _)| ClaimWitness::Graph {
        graph: OwnedGraph::cheapest_owner(&UndirectedGraph::from_pair_mask(n, mask), costs)
            .expect("same n"),
        cost,
    });
    Ok(ClaimVerdict {
        claim,
        applicable: true,
        holds: Some(witness.is_none()),
        witness,
        subject_cost: None,
        detail,
    })
}

//! Nash checks, best responses, best-response dynamics and exhaustive
//! equilibrium enumeration.
//!
//! Equilibrium means weak Nash unless [`NashConcept::Strict`] is asked for:
//! a profile fails only if some player can lower its own cost by more than
//! [`EPSILON`](crate::EPSILON) with a unilateral change of purchases.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{check_player, cost_of, player_cost, Cost, CostVector};
use crate::graph::{distance_sum_via, full_mask, spread_around, PlayerId, PlayerSet, StrategyProfile};
use crate::parallel::map_chunks;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NashMode {
    /// Compare against a full best response over all `2^(n-1)` purchase sets.
    Exact,
    /// Only single add, drop and swap moves. A necessary condition only.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NashConcept {
    /// No deviation is strictly better by more than epsilon.
    #[default]
    Weak,
    /// Every other strategy is strictly worse by more than epsilon.
    Strict,
}

/// A unilateral deviation that breaks the equilibrium condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationWitness {
    pub player: PlayerId,
    pub new_strategy: PlayerSet,
    pub old_cost: Cost,
    pub new_cost: Cost,
}

impl DeviationWitness {
    /// Recomputes both costs from scratch and checks the deviation really
    /// breaks `concept`.
    pub fn revalidate(&self, profile: &StrategyProfile, costs: &CostVector, concept: NashConcept) -> bool {
        let Ok(old) = player_cost(profile, costs, self.player) else {
            return false;
        };
        let Ok(deviated) = profile.with_strategy(self.player, self.new_strategy) else {
            return false;
        };
        let Ok(new) = player_cost(&deviated, costs, self.player) else {
            return false;
        };
        if !old.approx_eq(self.old_cost) || !new.approx_eq(self.new_cost) {
            return false;
        }
        match concept {
            NashConcept::Weak => new.improves_on(old),
            NashConcept::Strict => {
                self.new_strategy != profile.purchases(self.player) && new.at_most(old)
            }
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "player {} -> {}: {} -> {}",
            self.player, self.new_strategy, self.old_cost, self.new_cost
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashReport {
    pub is_nash: bool,
    pub mode: NashMode,
    pub concept: NashConcept,
    pub witness: Option<DeviationWitness>,
}

/// Per-profile view that prices any candidate strategy of one player without
/// rebuilding the graph.
struct Deviations<'a> {
    costs: &'a CostVector,
    adjacency: Vec<u64>,
    /// `incoming[i]`: players that bought an edge to `i`.
    incoming: Vec<u64>,
}

impl<'a> Deviations<'a> {
    fn new(sets: &[PlayerSet], costs: &'a CostVector) -> Self {
        let n = sets.len();
        let mut adjacency: Vec<u64> = sets.iter().map(|s| s.bits()).collect();
        let mut incoming = vec![0u64; n];
        for (i, s) in sets.iter().enumerate() {
            for j in s.iter() {
                adjacency[j] |= 1u64 << i;
                incoming[j] |= 1u64 << i;
            }
        }
        Deviations {
            costs,
            adjacency,
            incoming,
        }
    }

    #[inline]
    fn cost_with(&self, i: PlayerId, strategy: u64) -> Cost {
        cost_of(
            self.costs.alpha(i),
            strategy.count_ones() as usize,
            distance_sum_via(&self.adjacency, i, self.incoming[i] | strategy),
        )
    }

    fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Costs of every strategy of `i`, indexed by compressed subset index.
    fn all_costs(&self, i: PlayerId) -> Vec<(u64, Cost)> {
        let n = self.n();
        (0..1u64 << (n - 1))
            .map(|k| {
                let s = spread_around(k, i);
                (s, self.cost_with(i, s))
            })
            .collect()
    }

    fn has_improvement(&self, i: PlayerId, current: Cost) -> bool {
        let n = self.n();
        (0..1u64 << (n - 1)).any(|k| self.cost_with(i, spread_around(k, i)).improves_on(current))
    }
}

/// Exact minimum, then among strategies within epsilon of it the fewest
/// purchases, then the lexicographically smallest set.
fn select_best(candidates: impl Iterator<Item = (u64, Cost)> + Clone) -> Option<(PlayerSet, Cost, Cost)> {
    let min = candidates
        .clone()
        .map(|(_, c)| c)
        .min_by(|a, b| a.partial_cmp(b).expect("costs are never NaN"))?;
    let (set, cost) = candidates
        .filter(|&(_, c)| c.at_most(min))
        .map(|(s, c)| (PlayerSet::from_bits(s), c))
        .min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))?;
    Some((set, cost, min))
}

fn check_inputs(profile: &StrategyProfile, costs: &CostVector, limits: &Limits) -> Result<()> {
    costs.check_n(profile.n(), "profile")?;
    Limits::check("best response", profile.n(), limits.best_response)
}

/// A cost-minimizing purchase set for player `i` with everyone else fixed.
///
/// Searches all `2^(n-1)` subsets. Ties within epsilon go to the fewest
/// purchases, then to the lexicographically smallest set.
pub fn best_response(
    profile: &StrategyProfile,
    costs: &CostVector,
    i: PlayerId,
    limits: &Limits,
) -> Result<(PlayerSet, Cost)> {
    check_inputs(profile, costs, limits)?;
    check_player(i, profile.n())?;
    let view = Deviations::new(profile.sets(), costs);
    let all = view.all_costs(i);
    let (set, cost, _) = select_best(all.iter().copied()).expect("at least the empty strategy");
    Ok((set, cost))
}

/// Weak Nash check. See [`is_nash_with`] for the strict variant.
pub fn is_nash(profile: &StrategyProfile, costs: &CostVector, mode: NashMode, limits: &Limits) -> Result<NashReport> {
    is_nash_with(profile, costs, mode, NashConcept::Weak, limits)
}

/// Checks every player in index order and reports the first violation.
///
/// In exact mode the witness is the player's best response (weak) or its
/// best strategy other than the current one (strict). In local mode it is the
/// cheapest violating add, drop or swap.
pub fn is_nash_with(
    profile: &StrategyProfile,
    costs: &CostVector,
    mode: NashMode,
    concept: NashConcept,
    limits: &Limits,
) -> Result<NashReport> {
    costs.check_n(profile.n(), "profile")?;
    if mode == NashMode::Exact {
        Limits::check("best response", profile.n(), limits.best_response)?;
    }
    let view = Deviations::new(profile.sets(), costs);
    for i in 0..profile.n() {
        let current_set = profile.purchases(i).bits();
        let current = view.cost_with(i, current_set);
        let witness = match mode {
            NashMode::Exact => exact_violation(&view, i, current_set, current, concept),
            NashMode::Local => local_violation(&view, i, current_set, current, concept),
        };
        if let Some((new_strategy, new_cost)) = witness {
            return Ok(NashReport {
                is_nash: false,
                mode,
                concept,
                witness: Some(DeviationWitness {
                    player: i,
                    new_strategy,
                    old_cost: current,
                    new_cost,
                }),
            });
        }
    }
    Ok(NashReport {
        is_nash: true,
        mode,
        concept,
        witness: None,
    })
}

fn breaks(concept: NashConcept, candidate: Cost, current: Cost) -> bool {
    match concept {
        NashConcept::Weak => candidate.improves_on(current),
        NashConcept::Strict => candidate.at_most(current),
    }
}

fn exact_violation(
    view: &Deviations<'_>,
    i: PlayerId,
    current_set: u64,
    current: Cost,
    concept: NashConcept,
) -> Option<(PlayerSet, Cost)> {
    let all = view.all_costs(i);
    match concept {
        NashConcept::Weak => {
            let (set, cost, min) = select_best(all.iter().copied())?;
            if !min.improves_on(current) {
                return None;
            }
            if cost.improves_on(current) {
                Some((set, cost))
            } else {
                // The tie-broken choice sits inside the epsilon window; fall
                // back to the exact minimizer.
                all.iter()
                    .find(|&&(_, c)| c == min)
                    .map(|&(s, c)| (PlayerSet::from_bits(s), c))
            }
        }
        NashConcept::Strict => {
            let others = all.iter().copied().filter(|&(s, _)| s != current_set);
            let (set, cost, _) = select_best(others)?;
            breaks(concept, cost, current).then_some((set, cost))
        }
    }
}

fn local_violation(
    view: &Deviations<'_>,
    i: PlayerId,
    current_set: u64,
    current: Cost,
    concept: NashConcept,
) -> Option<(PlayerSet, Cost)> {
    let n = view.n();
    let owned = PlayerSet::from_bits(current_set);
    let absent = PlayerSet::from_bits(full_mask(n) & !current_set & !(1u64 << i));
    let drops = owned.iter().map(|j| current_set & !(1u64 << j));
    let adds = absent.iter().map(|k| current_set | (1u64 << k));
    let swaps = owned
        .iter()
        .flat_map(|j| absent.iter().map(move |k| (current_set & !(1u64 << j)) | (1u64 << k)));
    let mut best: Option<(u64, Cost)> = None;
    for s in drops.chain(adds).chain(swaps) {
        let c = view.cost_with(i, s);
        if breaks(concept, c, current) && best.is_none_or(|(_, b)| c < b) {
            best = Some((s, c));
        }
    }
    best.map(|(s, c)| (PlayerSet::from_bits(s), c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "order")]
pub enum DynamicsOrder {
    RoundRobin,
    /// A fresh seeded permutation of the players every round.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsOutcome {
    pub profile: StrategyProfile,
    /// A full round changed nothing.
    pub converged: bool,
    /// Rounds executed, including the final quiet one.
    pub rounds: usize,
    /// Strategy replacements made.
    pub updates: usize,
}

/// Repeatedly lets one player at a time switch to its best response.
///
/// A player already within epsilon of its best response keeps its strategy.
/// Stops after a round with no change or after `max_rounds` rounds.
pub fn best_response_dynamics(
    initial: &StrategyProfile,
    costs: &CostVector,
    order: DynamicsOrder,
    max_rounds: usize,
    limits: &Limits,
) -> Result<DynamicsOutcome> {
    check_inputs(initial, costs, limits)?;
    let n = initial.n();
    let mut sets = initial.sets().to_vec();
    let mut rng = match order {
        DynamicsOrder::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        DynamicsOrder::RoundRobin => None,
    };
    let mut players: Vec<PlayerId> = (0..n).collect();
    let mut updates = 0;
    for round in 1..=max_rounds {
        if let Some(rng) = rng.as_mut() {
            players.sort_unstable();
            players.shuffle(rng);
        }
        let mut changed = false;
        for &i in &players {
            let view = Deviations::new(&sets, costs);
            let current = view.cost_with(i, sets[i].bits());
            let all = view.all_costs(i);
            let (best, best_cost, _) = select_best(all.into_iter()).expect("nonempty");
            if best_cost.improves_on(current) {
                sets[i] = best;
                changed = true;
                updates += 1;
            }
        }
        if !changed {
            return Ok(DynamicsOutcome {
                profile: StrategyProfile::from_sets_unchecked(sets),
                converged: true,
                rounds: round,
                updates,
            });
        }
    }
    Ok(DynamicsOutcome {
        profile: StrategyProfile::from_sets_unchecked(sets),
        converged: false,
        rounds: max_rounds,
        updates,
    })
}

/// Every weak Nash equilibrium, in lexicographic profile order.
///
/// Walks all `2^(n(n-1))` profiles split across `workers` threads; the
/// result does not depend on the worker count.
pub fn enumerate_nash(costs: &CostVector, limits: &Limits, workers: usize) -> Result<Vec<StrategyProfile>> {
    let n = costs.n();
    Limits::check("Nash enumeration", n, limits.enumerate_nash)?;
    Limits::check("best response", n, limits.best_response)?;
    if n == 1 {
        return Ok(vec![StrategyProfile::empty(1)]);
    }
    let per_player = n - 1;
    let total_bits = (n * per_player) as u32;
    let chunk_bits = total_bits.min(8);
    let inner_bits = total_bits - chunk_bits;
    let choice_mask = (1u64 << per_player) - 1;

    let chunks = map_chunks(1u64 << chunk_bits, workers, |chunk| {
        let mut found = Vec::new();
        let mut sets = vec![PlayerSet::EMPTY; n];
        for low in 0..1u64 << inner_bits {
            let index = (chunk << inner_bits) | low;
            for (i, set) in sets.iter_mut().enumerate() {
                let choice = (index >> (i * per_player)) & choice_mask;
                *set = PlayerSet::from_bits(spread_around(choice, i));
            }
            let view = Deviations::new(&sets, costs);
            let stable = (0..n).all(|i| {
                let current = view.cost_with(i, sets[i].bits());
                !view.has_improvement(i, current)
            });
            if stable {
                found.push(StrategyProfile::from_sets_unchecked(sets.clone()));
            }
        }
        found
    });
    let mut all: Vec<StrategyProfile> = chunks.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

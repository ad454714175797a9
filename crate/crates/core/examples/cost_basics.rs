//! Player and social costs for a few small profiles.

use netforge::game::{player_costs, social_cost_owned, social_cost_profile};
use netforge::graph::all_pairs_distances;
use netforge::{CostVector, OwnedGraph, StrategyProfile};

pub fn run() -> netforge::Result<()> {
    let costs = CostVector::new(vec![1.0, 2.0, 3.0])?;

    // Path 0 - 1 - 2, both edges bought by the middle player.
    let path = StrategyProfile::new(vec![vec![], vec![0, 2], vec![]])?;
    println!("profile {path}");
    for (i, c) in player_costs(&path, &costs)?.iter().enumerate() {
        println!("  player {i}: {c}");
    }
    println!("  social cost {}", social_cost_profile(&path, &costs)?);

    let d = all_pairs_distances(&path.induced_graph());
    println!("  distance 0 -> 2 = {:?}", d.get(0, 2).get());

    // Billing each edge to its cheaper endpoint can only lower the total.
    let owned = OwnedGraph::cheapest_owner(&path.induced_graph(), &costs)?;
    println!("cheapest billing {owned}: {}", social_cost_owned(&owned, &costs)?);

    let split = StrategyProfile::new(vec![vec![1], vec![], vec![]])?;
    println!("disconnected {split}: {}", social_cost_profile(&split, &costs)?);
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

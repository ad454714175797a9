//! Best responses and best-response dynamics from the empty network.

use netforge::equilibrium::{best_response, best_response_dynamics, is_nash};
use netforge::game::social_cost_profile;
use netforge::{CostVector, DynamicsOrder, Limits, NashMode, StrategyProfile};

pub fn run() -> netforge::Result<()> {
    let limits = Limits::default();
    let costs = CostVector::new(vec![0.5, 1.5, 2.5, 4.0, 4.0])?;
    let empty = StrategyProfile::empty(costs.n());

    let (strategy, cost) = best_response(&empty, &costs, 0, &limits)?;
    println!("player 0 against the empty network buys {strategy} at cost {cost}");

    for order in [DynamicsOrder::RoundRobin, DynamicsOrder::Random { seed: 7 }] {
        let out = best_response_dynamics(&empty, &costs, order, 50, &limits)?;
        println!(
            "{order:?}: converged = {} after {} rounds, {} updates",
            out.converged, out.rounds, out.updates
        );
        println!("  final {} social cost {}", out.profile, social_cost_profile(&out.profile, &costs)?);
        if out.converged {
            assert!(is_nash(&out.profile, &costs, NashMode::Exact, &limits)?.is_nash);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

//! Every pure Nash equilibrium of a small game.

use netforge::equilibrium::enumerate_nash;
use netforge::game::social_cost_profile;
use netforge::{CostVector, Limits};

pub fn run() -> netforge::Result<()> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    for alphas in [vec![0.5, 0.5, 0.5], vec![0.5, 2.0, 2.0], vec![3.0, 3.0, 3.0, 3.0]] {
        let costs = CostVector::new(alphas)?;
        let all = enumerate_nash(&costs, &Limits::default(), workers)?;
        println!("alphas {:?}: {} equilibria", costs.as_slice(), all.len());
        for p in all.iter().take(6) {
            println!("  {p}  cost {}", social_cost_profile(p, &costs)?);
        }
        if all.len() > 6 {
            println!("  ...");
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

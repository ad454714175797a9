//! Exhaustive social optimum and the shape of its minimizers.

use netforge::optimum::social_optimum;
use netforge::{CostVector, Limits};

pub fn run() -> netforge::Result<()> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    for alphas in [vec![1.0; 4], vec![3.0; 4], vec![0.5, 1.0, 3.0, 3.0, 4.0]] {
        let costs = CostVector::new(alphas)?;
        let r = social_optimum(&costs, &Limits::default(), workers)?;
        println!(
            "alphas {:?}: optimum {} ({} connected of {} graphs)",
            costs.as_slice(),
            r.optimal_cost,
            r.connected_graphs,
            r.graphs_searched
        );
        for g in &r.optimal_graphs {
            let u = g.graph();
            println!("  {g}  star={} complete={}", u.is_star(), u.is_complete());
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

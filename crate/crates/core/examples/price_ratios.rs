//! Price of anarchy and stability across a few price vectors.

use netforge::fixed::format_fixed;
use netforge::optimum::price_ratios;
use netforge::{CostVector, Limits};

pub fn run() -> netforge::Result<()> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    println!("{:<24} {:>6} {:>14} {:>14}", "alphas", "NE", "PoA", "PoS");
    for alphas in [
        vec![0.5, 0.5, 0.5, 0.5],
        vec![0.5, 1.5, 2.5, 3.5],
        vec![2.0, 2.0, 2.0, 2.0],
        vec![4.0, 4.0, 4.0, 4.0],
    ] {
        let costs = CostVector::new(alphas)?;
        let r = price_ratios(&costs, &Limits::default(), workers)?;
        let show = |v: Option<f64>| v.map(format_fixed).unwrap_or_else(|| "-".into());
        println!(
            "{:<24} {:>6} {:>14} {:>14}",
            format!("{:?}", costs.as_slice()),
            r.equilibria,
            show(r.poa),
            show(r.pos)
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

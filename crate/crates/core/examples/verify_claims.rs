//! Claim verdicts for a handful of ascending price vectors.

use netforge::claims::verify_claims;
use netforge::{CostVector, Limits};

pub fn run() -> netforge::Result<()> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    for alphas in [vec![0.5, 0.8, 1.0], vec![0.5, 1.5, 2.5, 3.0], vec![3.0, 3.0, 4.0, 5.0], vec![2.0, 2.0, 3.0]] {
        let costs = CostVector::new(alphas)?;
        println!("alphas {:?}", costs.as_slice());
        for v in verify_claims(&costs, &Limits::default(), workers)? {
            let verdict = match v.holds {
                None => "n/a",
                Some(true) => "holds",
                Some(false) => "FAILS",
            };
            print!("  {:<14} {verdict}", v.claim.as_str());
            match &v.witness {
                Some(w) => println!("  witness: {}", w.summary()),
                None => println!(),
            }
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

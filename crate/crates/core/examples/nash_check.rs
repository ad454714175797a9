//! Exact and local Nash checks, with the deviation witness when one exists.

use netforge::claims::{complete_profile, star_profile};
use netforge::equilibrium::{is_nash, is_nash_with};
use netforge::{CostVector, Limits, NashConcept, NashMode};

pub fn run() -> netforge::Result<()> {
    let limits = Limits::default();

    let cheap = CostVector::uniform(4, 0.5)?;
    let report = is_nash(&complete_profile(4), &cheap, NashMode::Exact, &limits)?;
    println!("complete graph at alpha 0.5: nash = {}", report.is_nash);

    let pricey = CostVector::uniform(3, 2.0)?;
    let report = is_nash(&complete_profile(3), &pricey, NashMode::Exact, &limits)?;
    println!("complete graph at alpha 2: nash = {}", report.is_nash);
    if let Some(w) = &report.witness {
        println!("  {}", w.summary());
    }

    let star = star_profile(4, 0)?;
    let report = is_nash(&star, &CostVector::uniform(4, 1.5)?, NashMode::Local, &limits)?;
    println!("star at alpha 1.5, local moves only: nash = {}", report.is_nash);

    // At alpha = 1 the extra edge is exactly break-even.
    let edge = CostVector::uniform(3, 1.0)?;
    for concept in [NashConcept::Weak, NashConcept::Strict] {
        let r = is_nash_with(&complete_profile(3), &edge, NashMode::Exact, concept, &limits)?;
        println!("complete graph at alpha 1, {concept:?}: {}", r.is_nash);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

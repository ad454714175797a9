//! A small grid sweep written as CSV to stdout.

use netforge::sweep::{run_sweep, write_csv, AlphaSource, Checks, SweepConfig};
use netforge::Limits;

pub fn run() -> netforge::Result<()> {
    let config = SweepConfig {
        n: 3,
        source: AlphaSource::Grid {
            players: vec!["0.5,1.5,2.5".parse()?],
        },
        seed: 0,
        ascending: true,
        checks: Checks { claims: true, ratios: true },
        limits: Limits::default(),
    };
    let record = run_sweep(&config, 2)?;
    eprintln!("{} instances, {} failed verdicts", record.instances.len(), record.failures());
    write_csv(&record, std::io::stdout().lock())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

//! Drives the command-line front end in process, as the binary would.

use netforge::cli::run_command;

pub fn run() -> netforge::Result<()> {
    let sessions: [&[&str]; 4] = [
        &["netforge", "cost", "--alphas", "1,2,3", "--profile", "[[1],[2],[]]"],
        &["netforge", "best-response", "--alphas", "2,2,2", "--profile", "complete", "--player", "0"],
        &["netforge", "ratios", "--alphas", "0.5,1.5,2.5", "--workers", "1"],
        &["netforge", "verify-claims", "--alphas", "0.5,2,3", "--strict"],
    ];
    for argv in sessions {
        println!("$ {}", argv.join(" "));
        let code = run_command(argv.iter().copied(), &mut std::io::stdout(), &mut std::io::stderr());
        println!("exit {code}\n");
        if code != 0 {
            return Err(netforge::Error::InvalidInput(format!("{} exited {code}", argv[1])));
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

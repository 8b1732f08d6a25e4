use clap::Parser;

use ncwave::cli::{main_with, Cli, EXIT_CONFIG};

fn main() {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("NCWAVE_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // only fails if a pool already exists, which cannot happen here
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: NCWAVE_THREADS must be a positive integer, got {v:?}");
                std::process::exit(EXIT_CONFIG);
            }
        }
    }
    std::process::exit(main_with(cli));
}

use clap::Parser;
use underbarrier::cli::{main_with, Cli};

fn main() {
    if let Err(e) = main_with(Cli::parse()) {
        eprintln!("error [{}]: {e}", e.class_name());
        std::process::exit(e.exit_code());
    }
}

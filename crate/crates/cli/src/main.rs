//! Entry point for the `priorless` command-line tools.

use clap::Parser;

use priorless_cli::commands::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}

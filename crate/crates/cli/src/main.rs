use clap::Parser;

use twt_hnn_cli::args::Cli;
use twt_hnn_cli::commands;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = commands::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.code);
    }
}

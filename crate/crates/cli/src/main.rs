use clap::Parser;

fn main() {
    let args = openchain_cli::Args::parse();
    std::process::exit(openchain_cli::run_cli(args));
}

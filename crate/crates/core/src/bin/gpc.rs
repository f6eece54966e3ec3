use clap::Parser;

fn main() {
    std::process::exit(gpc::cli::run(gpc::cli::Cli::parse()));
}

use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("RRF_LOG", "warn")).init();
    let cli = rrf_harness::cli::Cli::parse();
    std::process::exit(rrf_harness::cli::run(cli));
}

use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ANTSYN_LOG", "info")).init();
    let cli = antsyn_cli::Cli::parse();
    if let Err(e) = antsyn_cli::run(&cli.command) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

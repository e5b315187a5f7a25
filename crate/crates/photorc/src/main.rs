use clap::Parser;

fn main() {
    let cli = photorc::cli::Cli::parse();
    if let Err(e) = photorc::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

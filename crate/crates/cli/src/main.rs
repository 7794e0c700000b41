use clap::Parser;

fn main() {
    let cli = qcorr_cli::Cli::parse();
    if let Err(e) = qcorr_cli::run(cli) {
        eprintln!("qcorr: {e}");
        std::process::exit(e.exit_code());
    }
}

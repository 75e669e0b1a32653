use clap::Parser;

fn main() {
    let cli = chanstat_cli::Cli::parse();
    match chanstat_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            std::process::exit(1);
        }
    }
}

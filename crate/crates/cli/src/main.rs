use clap::Parser;

fn main() {
    let cli = flexkin_cli::Cli::parse();
    std::process::exit(flexkin_cli::run(&cli));
}

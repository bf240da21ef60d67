fn main() {
    std::process::exit(natr_cli::run_cli(std::env::args()));
}

fn main() {
    std::process::exit(poncelet_cli::run_cli(std::env::args_os()));
}

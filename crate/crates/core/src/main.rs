fn main() {
    std::process::exit(randomd::cli::run_cli(std::env::args_os()));
}

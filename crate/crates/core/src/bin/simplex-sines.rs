fn main() {
    std::process::exit(simplex_sines::cli::run_cli(std::env::args_os()));
}

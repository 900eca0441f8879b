fn main() {
    std::process::exit(maxmean::cli::run_from_args(std::env::args_os()));
}

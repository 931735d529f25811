fn main() {
    std::process::exit(temporal_agony::cli::main_with_args(std::env::args_os()));
}

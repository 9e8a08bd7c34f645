fn main() {
    std::process::exit(cmapprox::cli::run(std::env::args_os()));
}

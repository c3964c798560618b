fn main() {
    std::process::exit(bragg_core::cli::run(std::env::args_os()));
}

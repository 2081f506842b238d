fn main() {
    std::process::exit(kcs_core::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(bihh_core::cli::run(std::env::args_os()));
}

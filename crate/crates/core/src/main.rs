fn main() {
    std::process::exit(deltacore::cli::run(std::env::args_os()));
}

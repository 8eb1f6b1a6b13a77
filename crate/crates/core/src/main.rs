fn main() {
    std::process::exit(sidorenko_local::cli::run(std::env::args_os()));
}

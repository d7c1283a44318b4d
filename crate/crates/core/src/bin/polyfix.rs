fn main() {
    std::process::exit(polyfix::cli::run(std::env::args_os()));
}

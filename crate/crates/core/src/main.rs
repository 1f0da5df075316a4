fn main() {
    std::process::exit(mixaug::cli::run(std::env::args_os()));
}

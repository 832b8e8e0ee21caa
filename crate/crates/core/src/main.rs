fn main() {
    std::process::exit(paramac::cli::run(std::env::args_os()));
}

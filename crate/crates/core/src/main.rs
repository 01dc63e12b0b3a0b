fn main() {
    std::process::exit(riscomp::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(tomoprob::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(gleason_cauchy::cli::run(std::env::args_os()));
}

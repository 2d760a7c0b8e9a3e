fn main() {
    std::process::exit(cuspidal_cli::run(std::env::args_os()));
}

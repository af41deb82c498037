fn main() {
    std::process::exit(magrand_cli::run(std::env::args_os()));
}

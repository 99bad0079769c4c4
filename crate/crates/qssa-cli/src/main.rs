fn main() {
    std::process::exit(qssa_cli::run(std::env::args_os()));
}

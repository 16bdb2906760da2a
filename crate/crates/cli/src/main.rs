fn main() {
    std::process::exit(tropdyn_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(cfie_cli::run(std::env::args_os()));
}

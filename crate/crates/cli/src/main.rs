fn main() {
    std::process::exit(tridec_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(vformation::cli::run_cli(std::env::args_os()));
}

fn main() {
    std::process::exit(cacose::io::cli::run_cli(std::env::args_os()));
}

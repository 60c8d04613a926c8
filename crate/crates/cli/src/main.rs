fn main() {
    std::process::exit(aderlw_cli::parse_and_run(std::env::args_os()));
}

fn main() {
    std::process::exit(gaplab_cli::run_from(std::env::args_os()));
}

fn main() {
    std::process::exit(qconvex_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(coarsegraph_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(holonomic::cli::run(std::env::args_os()));
}

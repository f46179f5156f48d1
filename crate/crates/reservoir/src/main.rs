fn main() {
    std::process::exit(reservoir::cli::main_with_args(std::env::args_os()));
}

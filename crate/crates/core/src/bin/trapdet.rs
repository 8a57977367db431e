fn main() {
    std::process::exit(trapdet::cli::main_with_args(std::env::args_os()));
}

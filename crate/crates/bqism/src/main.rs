fn main() {
    std::process::exit(bqism::cli::main_with_args(std::env::args_os()));
}

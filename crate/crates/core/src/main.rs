fn main() {
    std::process::exit(qelect::cli::main_with_args(std::env::args_os()));
}

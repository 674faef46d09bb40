fn main() {
    std::process::exit(e16::cli::main_with_args(std::env::args_os()));
}

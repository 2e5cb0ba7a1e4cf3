fn main() {
    std::process::exit(toriclab::cli::main_with_args(std::env::args_os()));
}

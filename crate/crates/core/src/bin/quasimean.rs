fn main() {
    std::process::exit(quasimean::cli::main_with_args(std::env::args_os()));
}

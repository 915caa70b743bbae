fn main() {
    std::process::exit(squarequad::cli::main_with_args(std::env::args_os()));
}

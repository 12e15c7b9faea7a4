fn main() {
    std::process::exit(psquid::cli::main_with_args(std::env::args_os()));
}

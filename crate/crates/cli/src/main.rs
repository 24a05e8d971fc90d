fn main() {
    std::process::exit(flagoid_cli::main_with_args(std::env::args_os()));
}

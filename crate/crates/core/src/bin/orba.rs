fn main() {
    std::process::exit(orba::cli::main_with_args(std::env::args_os()));
}

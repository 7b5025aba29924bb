fn main() {
    std::process::exit(minbox::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(gridramsey::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(rayclass::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(mcfe::cli::main_with_args(std::env::args_os()));
}

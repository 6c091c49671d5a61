fn main() {
    std::process::exit(windmill::cli::main_with_args(std::env::args_os()));
}

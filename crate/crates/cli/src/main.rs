fn main() {
    std::process::exit(qaoa_bo_cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(upv_core::cli::main_with_args(std::env::args_os()));
}

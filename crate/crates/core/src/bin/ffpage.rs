fn main() {
    std::process::exit(ffpage::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(abpe::cli::main_with(std::env::args_os()));
}

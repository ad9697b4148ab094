fn main() {
    std::process::exit(cohbundle::cli::main_with_args(std::env::args_os()));
}

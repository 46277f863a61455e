fn main() {
    std::process::exit(probpref::cli::main_with_args(std::env::args_os()));
}

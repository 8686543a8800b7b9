fn main() {
    std::process::exit(ghzsym::cli::main_with_args(std::env::args_os()));
}

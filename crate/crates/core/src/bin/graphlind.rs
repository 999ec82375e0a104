fn main() {
    std::process::exit(graphlind::experiment::cli::main_with_args(std::env::args_os()));
}

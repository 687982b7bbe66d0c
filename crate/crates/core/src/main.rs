fn main() {
    std::process::exit(qdesk::cli::main_with_args(std::env::args_os()));
}

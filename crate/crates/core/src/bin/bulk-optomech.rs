fn main() {
    std::process::exit(bulk_optomech::cli::main_with(std::env::args_os()));
}

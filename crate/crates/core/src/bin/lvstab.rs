fn main() {
    std::process::exit(lvstab::cli::main_with_args(std::env::args_os()));
}

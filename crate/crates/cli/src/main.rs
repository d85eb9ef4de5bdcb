fn main() {
    std::process::exit(orbitwave_cli::main_with_args(std::env::args_os()));
}

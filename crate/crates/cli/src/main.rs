fn main() {
    std::process::exit(spherepack_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(expdio_cli::run(std::env::args_os()));
}

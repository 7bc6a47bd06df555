fn main() {
    std::process::exit(fifocheck::frontend::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(fracbvp::cli::run(std::env::args_os()));
}

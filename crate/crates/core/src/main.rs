fn main() {
    std::process::exit(framecurve::cli::run(std::env::args_os()));
}

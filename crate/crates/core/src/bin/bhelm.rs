fn main() {
    std::process::exit(bernstein_helmholtz::cli::run(std::env::args_os()));
}

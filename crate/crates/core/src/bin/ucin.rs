fn main() {
    std::process::exit(ucin::cli::run(std::env::args_os()));
}

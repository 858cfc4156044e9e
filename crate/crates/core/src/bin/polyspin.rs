fn main() {
    std::process::exit(polyspin::cli::run(std::env::args_os()));
}

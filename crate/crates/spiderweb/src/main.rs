fn main() {
    std::process::exit(spiderweb::cli::run(std::env::args_os()));
}

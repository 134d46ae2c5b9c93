fn main() {
    std::process::exit(posecond::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(finrel::cli::run(std::env::args().skip(1)));
}

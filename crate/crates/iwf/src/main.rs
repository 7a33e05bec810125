fn main() {
    std::process::exit(iwf::cli::run(std::env::args()));
}

fn main() {
    std::process::exit(losstomo::cli::run());
}

fn main() {
    std::process::exit(hklab::cli::run());
}

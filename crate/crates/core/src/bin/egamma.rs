fn main() {
    std::process::exit(egamma_core::cli::run());
}

fn main() {
    std::process::exit(fquasi::cli::run());
}

fn main() {
    std::process::exit(glnn::cli::run());
}

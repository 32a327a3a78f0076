fn main() {
    std::process::exit(transelect::cli::run());
}

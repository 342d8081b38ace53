fn main() {
    std::process::exit(birkit::main_with_args());
}

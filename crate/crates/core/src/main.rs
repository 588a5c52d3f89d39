fn main() {
    std::process::exit(superbider::cli::run(std::env::args_os()));
}
